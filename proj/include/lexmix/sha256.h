#ifndef LEXMIX_SHA256_H_
#define LEXMIX_SHA256_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace lexmix {

// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::array<uint8_t, 32> finish();
  std::string finish_hex();

  static std::string hex(std::string_view data);
  static std::string hex_file(const std::string& path);

 private:
  void process_block(const uint8_t* block);

  std::array<uint32_t, 8> state_;
  uint64_t total_ = 0;
  std::array<uint8_t, 64> buffer_{};
  size_t buffered_ = 0;
};

}  // namespace lexmix

#endif  // LEXMIX_SHA256_H_
