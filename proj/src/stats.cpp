#include "lexmix/stats.h"

#include <algorithm>
#include <cmath>

#include "lexmix/errors.h"
#include "lexmix/rng.h"
#include "lexmix/text.h"

namespace lexmix {

void ReportAccumulator::add(const ReplacementOutcome& outcome) {
  add_counts(outcome.n_words, outcome.n_in_lexicon, outcome.k_actual,
             outcome.config_fingerprint);
}

void ReportAccumulator::add_counts(uint64_t n_words, uint64_t n_in_lexicon, uint64_t k_actual,
                                   uint64_t config_fingerprint) {
  if (fingerprint_ && *fingerprint_ != config_fingerprint) {
    throw UsageError("mixed replacement configurations in one report");
  }
  fingerprint_ = config_fingerprint;
  if (n_words == 0) {
    ++n_empty_docs_;
    return;
  }
  ++n_docs_;
  n_words_ += n_words;
  n_in_lexicon_ += n_in_lexicon;
  n_replaced_ += k_actual;
  const double actual = static_cast<double>(k_actual) / static_cast<double>(n_words);
  const double doc_coverage =
      static_cast<double>(n_in_lexicon) / static_cast<double>(n_words);
  sum_actual_ratio_ += actual;
  sum_doc_coverage_ += doc_coverage;
  const auto bucket = std::min<size_t>(100, static_cast<size_t>(actual * 100.0));
  ++histogram_[bucket];
}

void ReportAccumulator::merge(const ReportAccumulator& other) {
  if (other.fingerprint_) {
    if (fingerprint_ && *fingerprint_ != *other.fingerprint_) {
      throw UsageError("mixed replacement configurations in one report");
    }
    fingerprint_ = other.fingerprint_;
  }
  n_docs_ += other.n_docs_;
  n_empty_docs_ += other.n_empty_docs_;
  n_words_ += other.n_words_;
  n_in_lexicon_ += other.n_in_lexicon_;
  n_replaced_ += other.n_replaced_;
  sum_actual_ratio_ += other.sum_actual_ratio_;
  sum_doc_coverage_ += other.sum_doc_coverage_;
  for (size_t i = 0; i < histogram_.size(); ++i) histogram_[i] += other.histogram_[i];
}

ReplacementReport ReportAccumulator::finish() const {
  ReplacementReport report;
  report.n_docs = n_docs_;
  report.n_empty_docs = n_empty_docs_;
  report.n_words = n_words_;
  report.n_in_lexicon = n_in_lexicon_;
  report.n_replaced = n_replaced_;
  report.target_ratio = target_ratio_;
  report.histogram = histogram_;
  report.config_fingerprint = fingerprint_.value_or(0);
  if (n_docs_ > 0) {
    report.mean_actual_ratio = sum_actual_ratio_ / static_cast<double>(n_docs_);
    report.mean_doc_coverage = sum_doc_coverage_ / static_cast<double>(n_docs_);
  }
  if (n_words_ > 0) {
    report.weighted_actual_ratio =
        static_cast<double>(n_replaced_) / static_cast<double>(n_words_);
    report.coverage = static_cast<double>(n_in_lexicon_) / static_cast<double>(n_words_);
  }
  return report;
}

ReplacementReport measure_replacements(const std::vector<ReplacementOutcome>& outcomes,
                                       double target_ratio) {
  ReportAccumulator acc(target_ratio);
  for (const ReplacementOutcome& outcome : outcomes) acc.add(outcome);
  return acc.finish();
}

std::vector<CurvePoint> replacement_curve(const CorpusFactory& corpus, const BilingualLexicon& lex,
                                          const std::vector<double>& targets,
                                          uint64_t global_seed) {
  if (!std::is_sorted(targets.begin(), targets.end())) {
    throw UsageError("curve targets must be sorted ascending");
  }
  for (const double t : targets) {
    if (!(t >= 0.0) || t > 1.0) throw UsageError("curve targets must lie in [0, 1]");
  }
  std::vector<CurvePoint> curve;
  curve.reserve(targets.size());
  for (const double target : targets) {
    auto docs = corpus();
    ReportAccumulator acc(target);
    uint64_t seen = 0;
    while (std::optional<Document> doc = docs()) {
      ++seen;
      acc.add(replace(*doc, lex, target, derive_doc_seed(global_seed, doc->id)));
    }
    if (seen == 0) throw UsageError("cannot compute a replacement curve over an empty corpus");
    const ReplacementReport report = acc.finish();
    curve.push_back({target, report.mean_actual_ratio, report.weighted_actual_ratio});
  }
  return curve;
}

double coverage(const std::function<std::optional<Document>()>& docs, const BilingualLexicon& lex,
                bool* warned_empty) {
  uint64_t words = 0;
  uint64_t hits = 0;
  auto stream = docs;
  while (std::optional<Document> doc = stream()) {
    for (const WordSpan& w : segment_words(doc->text)) {
      ++words;
      if (lex.contains(w.normalized)) ++hits;
    }
  }
  if (warned_empty != nullptr) *warned_empty = words == 0;
  if (words == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(words);
}

}  // namespace lexmix
