#ifndef LEXMIX_REPLACE_H_
#define LEXMIX_REPLACE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lexmix/document.h"
#include "lexmix/lexicon.h"

namespace lexmix {

struct Replacement {
  size_t word_index = 0;
  std::string original;     // source bytes of the word core
  std::string substituted;  // translation as written, after case transfer
};

// Result of one replacement pass over one document.
struct ReplacementOutcome {
  Document document;  // transformed copy
  uint64_t n_words = 0;
  uint64_t n_in_lexicon = 0;
  uint64_t k_target = 0;
  uint64_t k_actual = 0;
  std::vector<Replacement> replaced;
  uint64_t config_fingerprint = 0;  // ties outcome to (lexicon, ratio)
};

// Fingerprint shared by every outcome produced under one (lexicon, ratio)
// configuration; replacement statistics refuse to aggregate across
// different values.
uint64_t replacement_config_fingerprint(const BilingualLexicon& lex, double ratio);

// Swaps floor(ratio * n_words) randomly chosen words for dictionary
// translations, capped by how many words the lexicon actually covers.
//
// Deterministic contract, stable across versions and worker layouts:
//   * candidate positions R = word indices whose normalized form is in
//     the lexicon, ascending;
//   * k_actual = min(floor(ratio * n_words), |R|);
//   * a splitmix64 stream seeded with `seed` drives a partial
//     Fisher-Yates over R; after each selection the same stream picks
//     the translation index for that word;
//   * the first letter of the substitute is uppercased when the first
//     letter of the original is uppercase;
//   * every byte outside selected word cores is copied verbatim.
ReplacementOutcome replace(const Document& doc, const BilingualLexicon& lex,
                           double ratio, uint64_t seed);

}  // namespace lexmix

#endif  // LEXMIX_REPLACE_H_
