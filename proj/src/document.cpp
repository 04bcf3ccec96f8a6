#include "lexmix/document.h"

#include <json.hpp>

#include "lexmix/errors.h"

namespace lexmix {

using nlohmann::json;

const char* to_string(Role role) { return role == Role::hr ? "hr" : "lr"; }

const char* to_string(DomainTag tag) {
  return tag == DomainTag::task ? "task" : "non-task";
}

namespace {

std::string lower_ascii(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c += 0x20;
  }
  return s;
}

}  // namespace

Document parse_document(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad JSONL record: ") + e.what());
  }
  if (!j.is_object()) throw DataError("bad JSONL record: not an object");
  Document doc;
  if (!j.contains("id") || !j.at("id").is_number()) {
    throw DataError("bad JSONL record: missing numeric 'id'");
  }
  doc.id = j.at("id").get<uint64_t>();
  if (!j.contains("text") || !j.at("text").is_string()) {
    throw DataError("bad JSONL record: missing string 'text'");
  }
  doc.text = j.at("text").get<std::string>();
  if (j.contains("lang")) doc.lang = j.at("lang").get<std::string>();
  if (j.contains("role")) {
    const std::string role = lower_ascii(j.at("role").get<std::string>());
    if (role == "hr") {
      doc.role = Role::hr;
    } else if (role == "lr") {
      doc.role = Role::lr;
    } else {
      throw DataError("bad JSONL record: role must be 'hr' or 'lr', got '" + role + "'");
    }
  }
  if (j.contains("domain") && !j.at("domain").is_null()) {
    const std::string tag = lower_ascii(j.at("domain").get<std::string>());
    if (tag == "task") {
      doc.domain = DomainTag::task;
    } else if (tag == "non-task" || tag == "non_task") {
      doc.domain = DomainTag::non_task;
    } else {
      throw DataError("bad JSONL record: domain must be 'task' or 'non-task', got '" + tag + "'");
    }
  }
  return doc;
}

std::string serialize_document(const Document& doc) {
  json j;
  if (doc.domain) j["domain"] = to_string(*doc.domain);
  j["id"] = doc.id;
  j["lang"] = doc.lang;
  j["role"] = to_string(doc.role);
  j["text"] = doc.text;
  return j.dump();
}

}  // namespace lexmix
