#ifndef LEXMIX_IO_H_
#define LEXMIX_IO_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lexmix/document.h"

namespace lexmix {

// Sequential line source over a list of files. Errors carry file and
// line number.
class LineSource {
 public:
  explicit LineSource(std::vector<std::string> paths);
  ~LineSource();
  LineSource(LineSource&&) noexcept;
  LineSource& operator=(LineSource&&) noexcept;

  // Next non-empty line, stripped of the trailing newline (and CR).
  std::optional<std::string> next();

  const std::string& current_path() const;
  uint64_t current_line() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Document stream over JSONL files.
std::function<std::optional<Document>()> jsonl_doc_source(std::vector<std::string> paths);

struct ShardInfo {
  std::string name;
  uint64_t docs = 0;
  uint64_t tokens = 0;
  uint64_t bytes = 0;
  std::string sha256;
};

// Rolls JSONL output across part-NNNNN files of at most docs_per_shard
// records, hashing bytes as they are written.
class ShardWriter {
 public:
  ShardWriter(std::string dir, std::string prefix, uint64_t docs_per_shard);
  ~ShardWriter();
  ShardWriter(const ShardWriter&) = delete;
  ShardWriter& operator=(const ShardWriter&) = delete;

  // Writes `line` plus '\n'. `tokens` feeds the shard manifest entry.
  void write(std::string_view line, uint64_t tokens);
  std::vector<ShardInfo> finish();

  uint64_t total_docs() const { return total_docs_; }
  uint64_t total_tokens() const { return total_tokens_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  uint64_t total_docs_ = 0;
  uint64_t total_tokens_ = 0;
};

}  // namespace lexmix

#endif  // LEXMIX_IO_H_
