#pragma once

#include <cstdint>
#include <random>

namespace flexics {

// Seedable random stream. Independent streams are derived from a master
// seed via splitmix64 so that parallel workers replay identically
// regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
    return Rng(splitmix64(master_seed + 0x632be59bd9b4e019ULL * (stream + 1)));
  }

  std::uint64_t next_u64() { return eng_(); }

  // One fair bit; consumes buffered words 64 bits at a time.
  bool next_bit() {
    if (bits_left_ == 0) {
      buf_ = eng_();
      bits_left_ = 64;
    }
    bool b = buf_ & 1u;
    buf_ >>= 1;
    --bits_left_;
    return b;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return double(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); n >= 1. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do { x = eng_(); } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t buf_ = 0;
  int bits_left_ = 0;
};

}  // namespace flexics
