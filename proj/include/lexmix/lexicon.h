#ifndef LEXMIX_LEXICON_H_
#define LEXMIX_LEXICON_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexmix {

// One source word with its translations, in first-seen order, deduplicated.
struct LexiconEntry {
  std::string source;  // normalized: case-folded, edge punctuation stripped
  std::vector<std::string> translations;
};

struct LoadSummary {
  uint64_t entries = 0;            // distinct normalized sources
  uint64_t pairs_ingested = 0;     // valid source/translation lines
  uint64_t merged_duplicates = 0;  // lines folded into an existing entry
  uint64_t skipped_lines = 0;      // malformed lines (wrong field count,
                                   // whitespace in source, empty fields)
};

// Source-to-translations map driving replacements. Immutable once built;
// concurrent readers need no locking.
class BilingualLexicon {
 public:
  BilingualLexicon() = default;
  BilingualLexicon(std::string source_language, std::string target_language,
                   std::string provenance = "");

  // Ingests one source/translation pair. The source is normalized here;
  // the translation is kept verbatim (spaces allowed). Returns false if
  // the pair was rejected (empty source after normalization, or interior
  // whitespace in the source).
  bool add(std::string_view source, std::string_view translation);

  // Appends `other`'s translation lists behind existing ones, entry by
  // entry. load(A+B) == merge(load(A), load(B)).
  void merge(const BilingualLexicon& other);

  const LexiconEntry* find(std::string_view normalized_source) const;
  bool contains(std::string_view normalized_source) const { return find(normalized_source) != nullptr; }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::string& source_language() const { return source_language_; }
  const std::string& target_language() const { return target_language_; }
  const std::string& provenance() const { return provenance_; }

  std::vector<std::string> sorted_sources() const;

  // Order-independent 64-bit digest of the full content; used as the
  // configuration fingerprint when aggregating replacement statistics.
  uint64_t fingerprint() const;

  // Canonical text form: sorted by source, `source<TAB>t1|t2|...`, one
  // entry per line. Deterministic for a given content.
  void serialize(std::ostream& out) const;
  std::string serialize() const;

  const std::unordered_map<std::string, LexiconEntry>& entries() const { return entries_; }

 private:
  std::unordered_map<std::string, LexiconEntry> entries_;
  std::string source_language_;
  std::string target_language_;
  std::string provenance_;
};

// Reads tab-separated `source<TAB>translation` lines (UTF-8). A line may
// carry several translations joined by `|`, which is also the canonical
// serialized form, so canonical files load back unchanged. Lines starting
// with `#` are comments; blank lines are ignored. Malformed lines are
// counted and skipped. Throws DataError when the file is unreadable and
// UsageError when no valid entry survives.
BilingualLexicon load_lexicon(const std::string& path, std::string source_lang,
                              std::string target_lang, LoadSummary* summary = nullptr);

// Same contract over an already-open stream (`provenance` names it).
BilingualLexicon load_lexicon(std::istream& in, std::string source_lang,
                              std::string target_lang, std::string provenance,
                              LoadSummary* summary = nullptr);

// Keeps round(fraction * size) entries, chosen uniformly without
// replacement: the sorted source list is partially Fisher-Yates shuffled
// by a splitmix64 stream seeded with `seed` and the first k keys win.
// Depends only on (sorted keys, seed, fraction), never on map order.
BilingualLexicon subsample_lexicon(const BilingualLexicon& lex, double fraction,
                                   uint64_t seed);

}  // namespace lexmix

#endif  // LEXMIX_LEXICON_H_
