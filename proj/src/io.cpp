#include "lexmix/io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "lexmix/errors.h"
#include "lexmix/sha256.h"

namespace lexmix {

struct LineSource::Impl {
  std::vector<std::string> paths;
  size_t file_index = 0;
  std::ifstream in;
  uint64_t line_no = 0;
  void open_current() {
    in.close();
    in.clear();
    in.open(paths[file_index], std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + paths[file_index]);
    line_no = 0;
  }
};

LineSource::LineSource(std::vector<std::string> paths) : impl_(std::make_unique<Impl>()) {
  impl_->paths = std::move(paths);
  if (!impl_->paths.empty()) impl_->open_current();
}

LineSource::~LineSource() = default;
LineSource::LineSource(LineSource&&) noexcept = default;
LineSource& LineSource::operator=(LineSource&&) noexcept = default;

std::optional<std::string> LineSource::next() {
  while (impl_->file_index < impl_->paths.size()) {
    std::string line;
    if (std::getline(impl_->in, line)) {
      ++impl_->line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return line;
    }
    if (impl_->in.bad()) {
      throw DataError("i/o error while reading " + impl_->paths[impl_->file_index]);
    }
    ++impl_->file_index;
    if (impl_->file_index < impl_->paths.size()) impl_->open_current();
  }
  return std::nullopt;
}

const std::string& LineSource::current_path() const {
  static const std::string kNone = "<none>";
  if (impl_->file_index >= impl_->paths.size()) return kNone;
  return impl_->paths[impl_->file_index];
}

uint64_t LineSource::current_line() const { return impl_->line_no; }

std::function<std::optional<Document>()> jsonl_doc_source(std::vector<std::string> paths) {
  auto source = std::make_shared<LineSource>(std::move(paths));
  return [source]() -> std::optional<Document> {
    std::optional<std::string> line = source->next();
    if (!line) return std::nullopt;
    try {
      return parse_document(*line);
    } catch (const DataError& e) {
      throw DataError(source->current_path() + ":" + std::to_string(source->current_line()) +
                      ": " + e.what());
    }
  };
}

struct ShardWriter::Impl {
  std::string dir;
  std::string prefix;
  uint64_t docs_per_shard;
  std::ofstream out;
  Sha256 hash;
  ShardInfo current;
  std::vector<ShardInfo> done;
  uint32_t shard_index = 0;
  bool open = false;

  void roll() {
    char name[64];
    std::snprintf(name, sizeof(name), "%s-%05u.jsonl", prefix.c_str(), shard_index++);
    current = ShardInfo{};
    current.name = name;
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    out.open(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write shard: " + path.string());
    hash = Sha256();
    open = true;
  }

  void close_current() {
    if (!open) return;
    out.close();
    if (out.fail()) throw DataError("i/o error closing shard " + current.name);
    current.sha256 = hash.finish_hex();
    done.push_back(current);
    open = false;
  }
};

ShardWriter::ShardWriter(std::string dir, std::string prefix, uint64_t docs_per_shard)
    : impl_(std::make_unique<Impl>()) {
  if (docs_per_shard == 0) throw UsageError("shard size must be positive");
  std::filesystem::create_directories(dir);
  impl_->dir = std::move(dir);
  impl_->prefix = std::move(prefix);
  impl_->docs_per_shard = docs_per_shard;
}

ShardWriter::~ShardWriter() = default;

void ShardWriter::write(std::string_view line, uint64_t tokens) {
  if (!impl_->open) impl_->roll();
  impl_->out.write(line.data(), static_cast<std::streamsize>(line.size()));
  impl_->out.put('\n');
  if (!impl_->out) throw DataError("i/o error writing shard " + impl_->current.name);
  impl_->hash.update(line);
  impl_->hash.update("\n");
  impl_->current.bytes += line.size() + 1;
  impl_->current.tokens += tokens;
  ++impl_->current.docs;
  ++total_docs_;
  total_tokens_ += tokens;
  if (impl_->current.docs >= impl_->docs_per_shard) impl_->close_current();
}

std::vector<ShardInfo> ShardWriter::finish() {
  impl_->close_current();
  return impl_->done;
}

}  // namespace lexmix
