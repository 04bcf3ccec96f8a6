#ifndef LEXMIX_RNG_H_
#define LEXMIX_RNG_H_

#include <cstdint>

namespace lexmix {

// Stateless splitmix64 finalizer (Steele/Lea/Vigna). Bijective on uint64.
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Per-record seed derivation: two rounds of the finalizer over
// global_seed XOR record_id. Injective in either argument when the
// other is held fixed, so distinct records never share a stream.
constexpr uint64_t derive_doc_seed(uint64_t global_seed, uint64_t doc_id) {
  return mix64(mix64(global_seed ^ doc_id));
}

// splitmix64 generator. Output matches the published reference
// implementation bit for bit, independent of platform and standard
// library; every seeded stream in this codebase goes through it.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64_rounds(state_);
  }

  // Uniform draw in [0, bound). bound must be nonzero.
  // Debiased via rejection on the top multiplication (Lemire).
  uint64_t next_below(uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr uint64_t mix64_rounds(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace lexmix

#endif  // LEXMIX_RNG_H_
