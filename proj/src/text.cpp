#include "lexmix/text.h"

namespace lexmix {

uint32_t decode_utf8(std::string_view s, size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xc0) == 0x80;
  };
  auto byte = [&](size_t k) {
    return static_cast<uint32_t>(static_cast<unsigned char>(s[i + k]) & 0x3f);
  };
  if ((b0 & 0xe0) == 0xc0 && cont(1)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x1f) << 6) | byte(1);
    if (cp >= 0x80) {
      i += 2;
      return cp;
    }
  } else if ((b0 & 0xf0) == 0xe0 && cont(1) && cont(2)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x0f) << 12) | (byte(1) << 6) | byte(2);
    if (cp >= 0x800 && (cp < 0xd800 || cp > 0xdfff)) {
      i += 3;
      return cp;
    }
  } else if ((b0 & 0xf8) == 0xf0 && cont(1) && cont(2) && cont(3)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x07) << 18) | (byte(1) << 12) |
                  (byte(2) << 6) | byte(3);
    if (cp >= 0x10000 && cp <= 0x10ffff) {
      i += 4;
      return cp;
    }
  }
  // Malformed lead or truncated sequence: emit the raw byte.
  ++i;
  return b0;
}

void encode_utf8(uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

namespace {

// Alternating capital/small pairs laid out from lo; capitals sit at
// even offsets. Covers the regular stretches of Latin Extended and
// historic Cyrillic.
bool is_pair_capital(uint32_t cp, uint32_t lo, uint32_t hi) {
  return cp >= lo && cp <= hi && (cp - lo) % 2 == 0;
}

}  // namespace

uint32_t fold_case(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  // Latin-1 supplement (multiplication sign excluded; no simple fold for sharp s).
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 0x20;
  // Latin Extended-A.
  if (is_pair_capital(cp, 0x0100, 0x012e)) return cp + 1;
  if (is_pair_capital(cp, 0x0132, 0x0136)) return cp + 1;
  if (is_pair_capital(cp, 0x0139, 0x0147)) return cp + 1;
  if (is_pair_capital(cp, 0x014a, 0x0176)) return cp + 1;
  if (cp == 0x0178) return 0x00ff;
  if (is_pair_capital(cp, 0x0179, 0x017d)) return cp + 1;
  if (cp == 0x017f) return 0x0073;  // long s
  // Latin Extended-B, the regular stretches.
  if (is_pair_capital(cp, 0x01cd, 0x01db)) return cp + 1;
  if (is_pair_capital(cp, 0x01de, 0x01ee)) return cp + 1;
  if (is_pair_capital(cp, 0x01f8, 0x021e)) return cp + 1;
  if (is_pair_capital(cp, 0x0222, 0x0232)) return cp + 1;
  // Greek.
  if (cp == 0x0386) return 0x03ac;
  if (cp >= 0x0388 && cp <= 0x038a) return cp + 0x25;
  if (cp == 0x038c) return 0x03cc;
  if (cp == 0x038e || cp == 0x038f) return cp + 0x3f;
  if (cp >= 0x0391 && cp <= 0x03a1) return cp + 0x20;
  if (cp >= 0x03a3 && cp <= 0x03ab) return cp + 0x20;
  if (cp == 0x03c2) return 0x03c3;  // final sigma folds to sigma
  // Cyrillic.
  if (cp >= 0x0400 && cp <= 0x040f) return cp + 0x50;
  if (cp >= 0x0410 && cp <= 0x042f) return cp + 0x20;
  if (is_pair_capital(cp, 0x0460, 0x0480)) return cp + 1;
  if (is_pair_capital(cp, 0x048a, 0x04be)) return cp + 1;
  if (is_pair_capital(cp, 0x04c1, 0x04cd)) return cp + 1;
  if (is_pair_capital(cp, 0x04d0, 0x052e)) return cp + 1;
  // Armenian.
  if (cp >= 0x0531 && cp <= 0x0556) return cp + 0x30;
  // Fullwidth Latin.
  if (cp >= 0xff21 && cp <= 0xff3a) return cp + 0x20;
  return cp;
}

uint32_t to_upper(uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return cp - 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xe0 && cp <= 0xfe && cp != 0xf7) return cp - 0x20;
  if (cp == 0x00ff) return 0x0178;
  auto odd_of = [&](uint32_t lo, uint32_t hi) {
    return cp >= lo + 1 && cp <= hi + 1 && (cp - lo - 1) % 2 == 0;
  };
  if (odd_of(0x0100, 0x012e) || odd_of(0x0132, 0x0136) ||
      odd_of(0x0139, 0x0147) || odd_of(0x014a, 0x0176) ||
      odd_of(0x0179, 0x017d) || odd_of(0x01cd, 0x01db) ||
      odd_of(0x01de, 0x01ee) || odd_of(0x01f8, 0x021e) ||
      odd_of(0x0222, 0x0232) || odd_of(0x0460, 0x0480) ||
      odd_of(0x048a, 0x04be) || odd_of(0x04c1, 0x04cd) ||
      odd_of(0x04d0, 0x052e)) {
    return cp - 1;
  }
  if (cp == 0x03ac) return 0x0386;
  if (cp >= 0x03ad && cp <= 0x03af) return cp - 0x25;
  if (cp == 0x03cc) return 0x038c;
  if (cp == 0x03cd || cp == 0x03ce) return cp - 0x3f;
  if (cp >= 0x03b1 && cp <= 0x03c1) return cp - 0x20;
  if (cp >= 0x03c3 && cp <= 0x03cb) return cp - 0x20;
  if (cp >= 0x0450 && cp <= 0x045f) return cp - 0x50;
  if (cp >= 0x0430 && cp <= 0x044f) return cp - 0x20;
  if (cp >= 0x0561 && cp <= 0x0586) return cp - 0x30;
  if (cp >= 0xff41 && cp <= 0xff5a) return cp - 0x20;
  return cp;
}

bool is_upper(uint32_t cp) { return fold_case(cp) != cp; }

bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20:
    case 0x85: case 0xa0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

bool is_punct_cp(uint32_t cp) {
  if (cp < 0x80) {
    return !(cp >= '0' && cp <= '9') && !(cp >= 'A' && cp <= 'Z') &&
           !(cp >= 'a' && cp <= 'z') && cp > 0x20;
  }
  switch (cp) {
    case 0x00a1: case 0x00ab: case 0x00b7: case 0x00bb: case 0x00bf:
    case 0x060c: case 0x061b: case 0x061f:  // Arabic comma/semicolon/question
    case 0x0964: case 0x0965:               // Devanagari danda
    case 0x3001: case 0x3002:               // CJK comma, full stop
    case 0x300c: case 0x300d: case 0x300e: case 0x300f:
    case 0x3008: case 0x3009: case 0x300a: case 0x300b:
    case 0x3010: case 0x3011: case 0x3014: case 0x3015:
      return true;
    default:
      break;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, daggers
  if (cp >= 0x2030 && cp <= 0x205e) return true;  // permille .. punct space
  if (cp >= 0xff01 && cp <= 0xff0f) return true;  // fullwidth ! .. /
  if (cp >= 0xff1a && cp <= 0xff20) return true;  // fullwidth : .. @
  if (cp >= 0xff3b && cp <= 0xff40) return true;  // fullwidth [ .. `
  if (cp >= 0xff5b && cp <= 0xff65) return true;  // fullwidth { .. halfwidth .
  return false;
}

namespace {

struct Cp {
  uint32_t value;
  size_t begin;
  size_t end;
};

std::vector<Cp> decode_all(std::string_view s) {
  std::vector<Cp> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const size_t begin = i;
    const uint32_t cp = decode_utf8(s, i);
    cps.push_back({cp, begin, i});
  }
  return cps;
}

}  // namespace

std::string normalize_word(std::string_view word) {
  const std::vector<Cp> cps = decode_all(word);
  size_t lo = 0;
  size_t hi = cps.size();
  while (lo < hi && (is_punct_cp(cps[lo].value) || is_space_cp(cps[lo].value))) ++lo;
  while (hi > lo && (is_punct_cp(cps[hi - 1].value) || is_space_cp(cps[hi - 1].value))) --hi;
  std::string out;
  out.reserve(word.size());
  for (size_t k = lo; k < hi; ++k) encode_utf8(fold_case(cps[k].value), out);
  return out;
}

std::string transfer_case(std::string_view original, std::string_view replacement) {
  if (original.empty() || replacement.empty()) return std::string(replacement);
  size_t oi = 0;
  const uint32_t first_orig = decode_utf8(original, oi);
  if (!is_upper(first_orig)) return std::string(replacement);
  size_t ri = 0;
  const uint32_t first_repl = decode_utf8(replacement, ri);
  std::string out;
  out.reserve(replacement.size());
  encode_utf8(to_upper(first_repl), out);
  out.append(replacement.substr(ri));
  return out;
}

std::vector<WordSpan> segment_words(std::string_view text) {
  std::vector<WordSpan> words;
  size_t i = 0;
  std::vector<Cp> run;
  while (i < text.size()) {
    // Skip whitespace.
    while (i < text.size()) {
      size_t j = i;
      if (is_space_cp(decode_utf8(text, j))) {
        i = j;
      } else {
        break;
      }
    }
    if (i >= text.size()) break;
    // Collect the non-whitespace run.
    run.clear();
    while (i < text.size()) {
      size_t j = i;
      const uint32_t cp = decode_utf8(text, j);
      if (is_space_cp(cp)) break;
      run.push_back({cp, i, j});
      i = j;
    }
    // Trim edge punctuation off the span.
    size_t lo = 0;
    size_t hi = run.size();
    while (lo < hi && is_punct_cp(run[lo].value)) ++lo;
    while (hi > lo && is_punct_cp(run[hi - 1].value)) --hi;
    if (lo == hi) continue;  // punctuation-only run
    WordSpan w;
    w.begin = run[lo].begin;
    w.end = run[hi - 1].end;
    w.normalized.reserve(w.end - w.begin);
    for (size_t k = lo; k < hi; ++k) encode_utf8(fold_case(run[k].value), w.normalized);
    words.push_back(std::move(w));
  }
  return words;
}

uint64_t count_tokens(std::string_view text) {
  uint64_t n = 0;
  bool in_token = false;
  size_t i = 0;
  while (i < text.size()) {
    const bool space = is_space_cp(decode_utf8(text, i));
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

}  // namespace lexmix
