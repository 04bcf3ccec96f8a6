#include "lexmix/replace.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "lexmix/errors.h"
#include "lexmix/rng.h"
#include "lexmix/text.h"

namespace lexmix {

uint64_t replacement_config_fingerprint(const BilingualLexicon& lex, double ratio) {
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(ratio));
  std::memcpy(&bits, &ratio, sizeof(bits));
  return mix64(lex.fingerprint() ^ mix64(bits));
}

ReplacementOutcome replace(const Document& doc, const BilingualLexicon& lex,
                           double ratio, uint64_t seed) {
  if (!(ratio >= 0.0) || ratio > 1.0) throw UsageError("replacement ratio must be in [0, 1]");

  const std::vector<WordSpan> words = segment_words(doc.text);

  ReplacementOutcome out;
  out.n_words = words.size();
  out.config_fingerprint = replacement_config_fingerprint(lex, ratio);

  std::vector<uint32_t> candidates;  // indices into `words`, ascending
  candidates.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    if (lex.contains(words[i].normalized)) candidates.push_back(static_cast<uint32_t>(i));
  }
  out.n_in_lexicon = candidates.size();
  out.k_target = static_cast<uint64_t>(std::floor(ratio * static_cast<double>(words.size())));
  out.k_actual = std::min<uint64_t>(out.k_target, candidates.size());

  // substitutions[word index] = replacement text; empty = untouched.
  std::vector<std::string> substitutions(words.size());
  SplitMix64 rng(seed);
  out.replaced.reserve(out.k_actual);
  for (uint64_t i = 0; i < out.k_actual; ++i) {
    const uint64_t j = i + rng.next_below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
    const uint32_t word_index = candidates[i];
    const WordSpan& w = words[word_index];
    const LexiconEntry* entry = lex.find(w.normalized);
    // Exactly one draw per selection, even for single-sense entries.
    const uint64_t t = rng.next_below(entry->translations.size());
    const std::string_view original(doc.text.data() + w.begin, w.end - w.begin);
    substitutions[word_index] = transfer_case(original, entry->translations[t]);
    out.replaced.push_back({word_index, std::string(original), substitutions[word_index]});
  }
  std::sort(out.replaced.begin(), out.replaced.end(),
            [](const Replacement& a, const Replacement& b) { return a.word_index < b.word_index; });

  // Rebuild: verbatim gaps, substituted cores where selected.
  std::string text;
  text.reserve(doc.text.size() + doc.text.size() / 4);
  size_t cursor = 0;
  for (size_t i = 0; i < words.size(); ++i) {
    text.append(doc.text, cursor, words[i].begin - cursor);
    if (!substitutions[i].empty()) {
      text.append(substitutions[i]);
    } else {
      text.append(doc.text, words[i].begin, words[i].end - words[i].begin);
    }
    cursor = words[i].end;
  }
  text.append(doc.text, cursor, doc.text.size() - cursor);

  out.document = doc;
  out.document.text = std::move(text);
  return out;
}

}  // namespace lexmix
