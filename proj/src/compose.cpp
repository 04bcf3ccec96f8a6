#include "lexmix/compose.h"

#include <algorithm>
#include <sstream>

#include "lexmix/errors.h"
#include "lexmix/rng.h"
#include "lexmix/text.h"

namespace lexmix {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::uniform: return "uniform";
    case Strategy::domain: return "domain";
    case Strategy::non_domain: return "non-domain";
    case Strategy::none: return "none";
  }
  return "uniform";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "uniform") return Strategy::uniform;
  if (s == "domain") return Strategy::domain;
  if (s == "non-domain" || s == "non_domain") return Strategy::non_domain;
  if (s == "none") return Strategy::none;
  throw UsageError("unknown strategy '" + s + "' (expected uniform, domain, non-domain or none)");
}

void InterventionPolicy::validate() const {
  if (!(replacement_ratio >= 0.0) || replacement_ratio > 1.0) {
    throw UsageError("replacement ratio must be in [0, 1]");
  }
  if (!(mix_ratio >= 0.0) || mix_ratio > 1.0) {
    throw UsageError("mix ratio must be in [0, 1]");
  }
  if (!(hr_share > 0.0) || !(hr_share < 1.0)) {
    throw UsageError("hr share must be strictly inside (0, 1)");
  }
}

namespace {

// Stream tags: the Bernoulli selection draw must not reuse the stream
// that replace() consumes for the same document, or selected documents
// would all start their shuffle from a draw known to be below the mix
// ratio.
constexpr uint64_t kSelectTag = 0x73656c6563740a01ull;
constexpr uint64_t kMixTag = 0x6d69782d73726301ull;

}  // namespace

DomainResolver resolver_from_doc_tags() {
  return [](const Document& doc) -> std::optional<bool> {
    if (!doc.domain) return std::nullopt;
    return *doc.domain == DomainTag::task;
  };
}

DomainResolver resolver_from_task_ids(std::unordered_set<uint64_t> task_ids,
                                      std::optional<std::unordered_set<uint64_t>> known_ids) {
  return [task = std::move(task_ids),
          known = std::move(known_ids)](const Document& doc) -> std::optional<bool> {
    if (task.count(doc.id) > 0) return true;
    if (known && known->count(doc.id) == 0) return std::nullopt;
    return false;
  };
}

Route route_uniform(const Document& doc, double mix_ratio, uint64_t global_seed) {
  if (doc.role == Role::lr) return Route::lr;
  if (mix_ratio >= 1.0) return Route::intervened;
  if (mix_ratio <= 0.0) return Route::untouched_hr;
  SplitMix64 rng(mix64(derive_doc_seed(global_seed, doc.id) ^ kSelectTag));
  return rng.next_unit() < mix_ratio ? Route::intervened : Route::untouched_hr;
}

namespace {

Route route_by_domain(const Document& doc, const DomainResolver& resolve, bool intervene_on_task) {
  if (doc.role == Role::lr) return Route::lr;
  const std::optional<bool> is_task = resolve(doc);
  if (!is_task) {
    throw DataError("document " + std::to_string(doc.id) + " cannot be resolved to task/non-task");
  }
  return *is_task == intervene_on_task ? Route::intervened : Route::untouched_hr;
}

using RouteFn = std::function<Route(const Document&)>;

CorpusPartition select_by(const DocSource& docs, const RouteFn& route) {
  CorpusPartition part;
  std::vector<uint64_t> unresolved;
  while (std::optional<Document> doc = docs()) {
    try {
      switch (route(*doc)) {
        case Route::intervened: part.intervened.insert(doc->id); break;
        case Route::untouched_hr: part.untouched_hr.insert(doc->id); break;
        case Route::lr: part.lr.insert(doc->id); break;
      }
    } catch (const DataError&) {
      unresolved.push_back(doc->id);
    }
  }
  if (!unresolved.empty()) {
    std::sort(unresolved.begin(), unresolved.end());
    std::ostringstream msg;
    msg << unresolved.size() << " document(s) lack a task/non-task resolution: ";
    const size_t show = std::min<size_t>(unresolved.size(), 20);
    for (size_t i = 0; i < show; ++i) {
      if (i) msg << ", ";
      msg << unresolved[i];
    }
    if (show < unresolved.size()) msg << ", ...";
    throw DataError(msg.str());
  }
  return part;
}

}  // namespace

Route route_domain(const Document& doc, const DomainResolver& resolve) {
  return route_by_domain(doc, resolve, /*intervene_on_task=*/true);
}

Route route_non_domain(const Document& doc, const DomainResolver& resolve) {
  return route_by_domain(doc, resolve, /*intervene_on_task=*/false);
}

CorpusPartition select_uniform(const DocSource& docs, double mix_ratio, uint64_t global_seed) {
  if (!(mix_ratio >= 0.0) || mix_ratio > 1.0) throw UsageError("mix ratio must be in [0, 1]");
  return select_by(docs, [&](const Document& d) { return route_uniform(d, mix_ratio, global_seed); });
}

CorpusPartition select_domain(const DocSource& docs, const DomainResolver& resolve) {
  return select_by(docs, [&](const Document& d) { return route_domain(d, resolve); });
}

CorpusPartition select_non_domain(const DocSource& docs, const DomainResolver& resolve) {
  return select_by(docs, [&](const Document& d) { return route_non_domain(d, resolve); });
}

MixSummary budget_mix(const DocSource& hr_docs, const std::function<DocSource()>& lr_factory,
                      double hr_share, uint64_t token_budget, uint64_t global_seed,
                      const std::function<void(const Document&, Role)>& emit) {
  if (!(hr_share > 0.0) || !(hr_share < 1.0)) {
    throw UsageError("hr share must be strictly inside (0, 1)");
  }
  if (token_budget == 0) throw UsageError("token budget must be positive");

  MixSummary summary;
  SplitMix64 rng(mix64(global_seed ^ kMixTag));
  DocSource lr_docs = lr_factory();
  uint64_t lr_tokens_at_restart = 0;
  bool lr_fresh = true;

  while (summary.total_tokens() < token_budget) {
    // Token-weighted draw: the Bernoulli probability is corrected by the
    // running mean document sizes of the two streams so that the emitted
    // TOKEN share converges to hr_share even when one side's documents
    // run longer. With equally sized documents this reduces to a plain
    // draw at hr_share.
    double p = hr_share;
    if (summary.hr_docs > 0 && summary.lr_docs > 0 && summary.hr_tokens > 0 &&
        summary.lr_tokens > 0) {
      const double mean_hr =
          static_cast<double>(summary.hr_tokens) / static_cast<double>(summary.hr_docs);
      const double mean_lr =
          static_cast<double>(summary.lr_tokens) / static_cast<double>(summary.lr_docs);
      p = hr_share * mean_lr / (hr_share * mean_lr + (1.0 - hr_share) * mean_hr);
    }
    const bool pick_hr = rng.next_unit() < p;
    if (pick_hr) {
      std::optional<Document> doc = hr_docs();
      if (!doc) {
        std::ostringstream msg;
        msg << "high-resource stream exhausted before the token budget: emitted "
            << summary.total_tokens() << " of " << token_budget << " tokens ("
            << summary.hr_docs << " hr docs, " << summary.lr_docs << " lr docs)";
        throw DataError(msg.str());
      }
      const uint64_t tokens = count_tokens(doc->text);
      summary.hr_tokens += tokens;
      ++summary.hr_docs;
      emit(*doc, Role::hr);
    } else {
      std::optional<Document> doc = lr_docs();
      if (!doc) {
        // Scarce side repeats: restart the stream. A cycle that adds no
        // tokens can never fill the budget, so it is rejected.
        if (lr_fresh || summary.lr_tokens == lr_tokens_at_restart) {
          throw UsageError("low-resource corpus contributes no tokens; cannot cycle it");
        }
        lr_tokens_at_restart = summary.lr_tokens;
        lr_docs = lr_factory();
        lr_fresh = true;
        continue;
      }
      lr_fresh = false;
      const uint64_t tokens = count_tokens(doc->text);
      summary.lr_tokens += tokens;
      ++summary.lr_docs;
      emit(*doc, Role::lr);
    }
  }
  return summary;
}

}  // namespace lexmix
