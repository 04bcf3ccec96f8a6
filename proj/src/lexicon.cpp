#include "lexmix/lexicon.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lexmix/errors.h"
#include "lexmix/rng.h"
#include "lexmix/text.h"

namespace lexmix {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr uint64_t kFnvPrime = 0x100000001b3ull;

uint64_t fnv1a(std::string_view s, uint64_t h = kFnvOffset) {
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

std::string_view trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return s.substr(b, e - b);
}

bool has_interior_space(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    if (is_space_cp(decode_utf8(s, i))) return true;
  }
  return false;
}

}  // namespace

BilingualLexicon::BilingualLexicon(std::string source_language, std::string target_language,
                                   std::string provenance)
    : source_language_(std::move(source_language)),
      target_language_(std::move(target_language)),
      provenance_(std::move(provenance)) {}

bool BilingualLexicon::add(std::string_view source, std::string_view translation) {
  const std::string key = normalize_word(source);
  if (key.empty() || has_interior_space(key)) return false;
  const std::string_view value = trim(translation);
  if (value.empty()) return false;
  LexiconEntry& entry = entries_[key];
  if (entry.source.empty()) entry.source = key;
  for (const std::string& t : entry.translations) {
    if (t == value) return true;  // duplicate pair, already merged
  }
  entry.translations.emplace_back(value);
  return true;
}

void BilingualLexicon::merge(const BilingualLexicon& other) {
  std::vector<const LexiconEntry*> incoming;
  incoming.reserve(other.entries_.size());
  for (const auto& [key, entry] : other.entries_) incoming.push_back(&entry);
  // Deterministic merge order regardless of hash-map layout.
  std::sort(incoming.begin(), incoming.end(),
            [](const LexiconEntry* a, const LexiconEntry* b) { return a->source < b->source; });
  for (const LexiconEntry* entry : incoming) {
    for (const std::string& t : entry->translations) add(entry->source, t);
  }
}

const LexiconEntry* BilingualLexicon::find(std::string_view normalized_source) const {
  // Transparent lookup would avoid this copy; the map key type keeps it simple.
  const auto it = entries_.find(std::string(normalized_source));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> BilingualLexicon::sorted_sources() const {
  std::vector<std::string> keys;
  keys.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

uint64_t BilingualLexicon::fingerprint() const {
  // XOR of per-entry hashes: order independent across map layouts,
  // order sensitive within an entry's translation list.
  uint64_t acc = 0;
  for (const auto& [key, entry] : entries_) {
    uint64_t h = fnv1a(key);
    for (const std::string& t : entry.translations) {
      h = fnv1a("|", h);
      h = fnv1a(t, h);
    }
    acc ^= mix64(h);
  }
  return mix64(acc ^ entries_.size());
}

void BilingualLexicon::serialize(std::ostream& out) const {
  for (const std::string& key : sorted_sources()) {
    const LexiconEntry& entry = entries_.at(key);
    out << key << '\t';
    for (size_t i = 0; i < entry.translations.size(); ++i) {
      if (i) out << '|';
      out << entry.translations[i];
    }
    out << '\n';
  }
}

std::string BilingualLexicon::serialize() const {
  std::ostringstream out;
  serialize(out);
  return out.str();
}

BilingualLexicon load_lexicon(std::istream& in, std::string source_lang,
                              std::string target_lang, std::string provenance,
                              LoadSummary* summary) {
  BilingualLexicon lex(std::move(source_lang), std::move(target_lang), std::move(provenance));
  LoadSummary local;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || trim(view).empty()) continue;
    if (view.front() == '#') continue;
    const size_t tab = view.find('\t');
    if (tab == std::string_view::npos || view.find('\t', tab + 1) != std::string_view::npos) {
      ++local.skipped_lines;
      continue;
    }
    const std::string_view source = view.substr(0, tab);
    const std::string_view rest = view.substr(tab + 1);
    if (trim(source).empty() || trim(rest).empty()) {
      ++local.skipped_lines;
      continue;
    }
    const size_t before = lex.size();
    bool any = false;
    // Translation field may hold several senses joined by '|'.
    size_t pos = 0;
    while (pos <= rest.size()) {
      const size_t bar = rest.find('|', pos);
      const std::string_view piece =
          rest.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
      if (!trim(piece).empty()) any |= lex.add(source, piece);
      if (bar == std::string_view::npos) break;
      pos = bar + 1;
    }
    if (!any) {
      ++local.skipped_lines;
      continue;
    }
    ++local.pairs_ingested;
    if (lex.size() == before) ++local.merged_duplicates;
  }
  if (in.bad()) throw DataError("i/o error while reading lexicon");
  local.entries = lex.size();
  if (summary != nullptr) *summary = local;
  if (lex.empty()) throw UsageError("lexicon has no valid entries");
  return lex;
}

BilingualLexicon load_lexicon(const std::string& path, std::string source_lang,
                              std::string target_lang, LoadSummary* summary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file: " + path);
  return load_lexicon(in, std::move(source_lang), std::move(target_lang), path, summary);
}

BilingualLexicon subsample_lexicon(const BilingualLexicon& lex, double fraction,
                                   uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw UsageError("subsample fraction must be in (0, 1]");
  }
  if (lex.empty()) throw UsageError("cannot subsample an empty lexicon");
  std::vector<std::string> keys = lex.sorted_sources();
  const auto want = static_cast<size_t>(std::llround(fraction * static_cast<double>(keys.size())));
  const size_t k = std::min(want, keys.size());

  SplitMix64 rng(seed);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng.next_below(keys.size() - i));
    std::swap(keys[i], keys[j]);
  }

  BilingualLexicon out(lex.source_language(), lex.target_language(), lex.provenance());
  for (size_t i = 0; i < k; ++i) {
    const LexiconEntry* entry = lex.find(keys[i]);
    for (const std::string& t : entry->translations) out.add(entry->source, t);
  }
  return out;
}

}  // namespace lexmix
