#ifndef LEXMIX_COMPOSE_H_
#define LEXMIX_COMPOSE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "lexmix/document.h"

namespace lexmix {

enum class Strategy { uniform, domain, non_domain, none };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// Knobs of one intervention run. Replacement ratio caps per-document
// substitutions; mix ratio picks which share of eligible documents gets
// touched (pinned to 1.0 inside the eligible subset for the domain and
// non-domain strategies); hr_share is the high-resource token share of
// the composed mixture.
struct InterventionPolicy {
  Strategy strategy = Strategy::uniform;
  double replacement_ratio = 0.7;
  double mix_ratio = 0.9;
  double hr_share = 0.975;
  uint64_t global_seed = 0;

  bool operator==(const InterventionPolicy&) const = default;

  void validate() const;  // throws UsageError on out-of-range fields
};

// Where one document lands under a selection strategy.
enum class Route { intervened, untouched_hr, lr };

// Maps a document to task / non-task. nullopt = unresolvable.
using DomainResolver = std::function<std::optional<bool>(const Document&)>;

// Resolver reading the document's own domain tag.
DomainResolver resolver_from_doc_tags();
// Resolver driven by an id set (typically cluster assignments filtered
// to the domain cluster). Documents not in the set count as non-task;
// `known_ids`, when given, bounds resolvability.
DomainResolver resolver_from_task_ids(std::unordered_set<uint64_t> task_ids,
                                      std::optional<std::unordered_set<uint64_t>> known_ids = std::nullopt);

// Per-document routing. Pure functions of (document, policy inputs), so
// results are identical for any worker layout. LR documents always pass
// through untouched.
Route route_uniform(const Document& doc, double mix_ratio, uint64_t global_seed);
Route route_domain(const Document& doc, const DomainResolver& resolve);
Route route_non_domain(const Document& doc, const DomainResolver& resolve);

// Disjoint, exhaustive id partition of one corpus pass.
struct CorpusPartition {
  std::unordered_set<uint64_t> intervened;
  std::unordered_set<uint64_t> untouched_hr;
  std::unordered_set<uint64_t> lr;

  size_t total() const { return intervened.size() + untouched_hr.size() + lr.size(); }
};

using DocSource = std::function<std::optional<Document>()>;

// Materialized selections over a document stream. route_domain /
// route_non_domain failures are collected and reported in one error.
CorpusPartition select_uniform(const DocSource& docs, double mix_ratio, uint64_t global_seed);
CorpusPartition select_domain(const DocSource& docs, const DomainResolver& resolve);
CorpusPartition select_non_domain(const DocSource& docs, const DomainResolver& resolve);

struct MixSummary {
  uint64_t hr_docs = 0;
  uint64_t lr_docs = 0;
  uint64_t hr_tokens = 0;
  uint64_t lr_tokens = 0;

  uint64_t total_tokens() const { return hr_tokens + lr_tokens; }
  double hr_token_share() const {
    return total_tokens() == 0 ? 0.0
                               : static_cast<double>(hr_tokens) / static_cast<double>(total_tokens());
  }
};

// Interleaves the two corpora by seeded token-weighted source draws
// (probability hr_share when both streams carry equally sized documents,
// corrected by running mean document sizes otherwise) until the emitted
// whitespace-token count reaches token_budget. The LR stream restarts
// from `lr_factory` when it runs dry; an exhausted HR stream is fatal
// (DataError carries progress). Emission order is deterministic for
// fixed inputs and seed.
MixSummary budget_mix(const DocSource& hr_docs, const std::function<DocSource()>& lr_factory,
                      double hr_share, uint64_t token_budget, uint64_t global_seed,
                      const std::function<void(const Document&, Role)>& emit);

}  // namespace lexmix

#endif  // LEXMIX_COMPOSE_H_
