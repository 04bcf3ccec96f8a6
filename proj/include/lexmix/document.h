#ifndef LEXMIX_DOCUMENT_H_
#define LEXMIX_DOCUMENT_H_

#include <cstdint>
#include <optional>
#include <string>

namespace lexmix {

enum class Role { hr, lr };
enum class DomainTag { task, non_task };

const char* to_string(Role role);
const char* to_string(DomainTag tag);

// One corpus record. Words are derived on demand via segment_words();
// only the text is authoritative.
struct Document {
  uint64_t id = 0;
  std::string lang;
  Role role = Role::hr;
  std::optional<DomainTag> domain;
  std::string text;

  bool operator==(const Document&) const = default;
};

// JSONL codec. Keys: id, lang, role, domain (optional), text. parse_document
// accepts role/domain values case-insensitively and tolerates unknown keys;
// serialize_document emits the canonical form (sorted keys, no spaces), so
// serialize(parse(x)) == x whenever x is canonical.
Document parse_document(const std::string& line);
std::string serialize_document(const Document& doc);

}  // namespace lexmix

#endif  // LEXMIX_DOCUMENT_H_
