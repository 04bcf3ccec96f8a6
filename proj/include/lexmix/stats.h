#ifndef LEXMIX_STATS_H_
#define LEXMIX_STATS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lexmix/lexicon.h"
#include "lexmix/replace.h"

namespace lexmix {

// Aggregate replacement behaviour of one run. Two flavours of each rate
// are kept: the per-document mean (documents weigh equally) and the
// token-weighted pool.
struct ReplacementReport {
  uint64_t n_docs = 0;        // documents with at least one word
  uint64_t n_empty_docs = 0;  // word-free documents, excluded from means
  uint64_t n_words = 0;
  uint64_t n_in_lexicon = 0;
  uint64_t n_replaced = 0;
  double target_ratio = 0.0;
  double mean_actual_ratio = 0.0;      // mean over docs of k_actual / n_words
  double weighted_actual_ratio = 0.0;  // n_replaced / n_words
  double mean_doc_coverage = 0.0;      // mean over docs of in-lexicon share
  double coverage = 0.0;               // n_in_lexicon / n_words
  // Per-document actual ratio, 1pp buckets; bucket i holds
  // [i/100, (i+1)/100), the last one includes 1.0.
  std::array<uint64_t, 101> histogram{};
  uint64_t config_fingerprint = 0;
};

// Streaming, constant-memory accumulator with an associative and
// commutative merge, so partial reports from parallel workers combine
// in any order. Outcomes from different (lexicon, ratio) configurations
// are rejected.
class ReportAccumulator {
 public:
  explicit ReportAccumulator(double target_ratio) : target_ratio_(target_ratio) {}

  void add(const ReplacementOutcome& outcome);
  // Same aggregation from bare counts, for callers that drop the
  // transformed document early.
  void add_counts(uint64_t n_words, uint64_t n_in_lexicon, uint64_t k_actual,
                  uint64_t config_fingerprint);
  void merge(const ReportAccumulator& other);
  ReplacementReport finish() const;

 private:
  double target_ratio_;
  std::optional<uint64_t> fingerprint_;
  uint64_t n_docs_ = 0;
  uint64_t n_empty_docs_ = 0;
  uint64_t n_words_ = 0;
  uint64_t n_in_lexicon_ = 0;
  uint64_t n_replaced_ = 0;
  double sum_actual_ratio_ = 0.0;
  double sum_doc_coverage_ = 0.0;
  std::array<uint64_t, 101> histogram_{};
};

ReplacementReport measure_replacements(const std::vector<ReplacementOutcome>& outcomes,
                                       double target_ratio);

struct CurvePoint {
  double target = 0.0;
  double mean_actual = 0.0;
  double weighted_actual = 0.0;
};

// A fresh document stream for each pass.
using CorpusFactory = std::function<std::function<std::optional<Document>()>()>;

// Runs replace() over the corpus once per target ratio, reusing the
// same per-document seed schedule, and reports the mean actual ratio.
// With a shared schedule the curve is exactly non-decreasing and
// plateaus at corpus coverage.
std::vector<CurvePoint> replacement_curve(const CorpusFactory& corpus, const BilingualLexicon& lex,
                                          const std::vector<double>& targets, uint64_t global_seed);

// Share of word occurrences (not types) whose normalized form is in the
// lexicon. Empty corpus yields 0 and sets *warned_empty when provided.
double coverage(const std::function<std::optional<Document>()>& docs, const BilingualLexicon& lex,
                bool* warned_empty = nullptr);

}  // namespace lexmix

#endif  // LEXMIX_STATS_H_
