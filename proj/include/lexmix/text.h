#ifndef LEXMIX_TEXT_H_
#define LEXMIX_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lexmix {

// UTF-8 decoding. Invalid sequences decode as the single raw byte value
// and advance one byte, so malformed input passes through unharmed.
uint32_t decode_utf8(std::string_view s, size_t& i);
void encode_utf8(uint32_t cp, std::string& out);

// Simple (codepoint-to-codepoint) case fold over the bicameral scripts
// this tool meets in practice: ASCII, Latin-1, Latin Extended-A/B
// (partial), Greek, Cyrillic, Armenian, fullwidth Latin. Lowercase
// codepoints map to themselves, so folding is idempotent.
uint32_t fold_case(uint32_t cp);
// Inverse direction for first-letter case transfer. Returns cp itself
// when no uppercase form is known.
uint32_t to_upper(uint32_t cp);
bool is_upper(uint32_t cp);

bool is_space_cp(uint32_t cp);
// Punctuation and symbol codepoints that get stripped from word edges:
// ASCII non-alphanumerics, general punctuation, CJK punctuation,
// fullwidth forms, Devanagari danda, Arabic comma, and friends.
bool is_punct_cp(uint32_t cp);

// Case-folds a word and strips leading/trailing punctuation. The empty
// string means "no lookup form" (input was punctuation-only).
std::string normalize_word(std::string_view word);

// First-letter case transfer: uppercase the first codepoint of
// `replacement` iff the first codepoint of `original` is uppercase.
std::string transfer_case(std::string_view original, std::string_view replacement);

// One word found in a text: the half-open byte span of its core (edge
// punctuation excluded) plus the case-folded lookup form.
struct WordSpan {
  size_t begin = 0;
  size_t end = 0;
  std::string normalized;
};

// Splits text into words: maximal non-whitespace runs with leading and
// trailing punctuation excluded from the span. Runs that are entirely
// punctuation yield no word. Spans are ordered, non-overlapping and lie
// within the text, so the text rebuilds exactly from spans plus gaps.
std::vector<WordSpan> segment_words(std::string_view text);

// Whitespace-run count; the token-count proxy used for budget math.
uint64_t count_tokens(std::string_view text);

}  // namespace lexmix

#endif  // LEXMIX_TEXT_H_
