#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flexics {

// Dense fixed-width bitset backed by 64-bit words. Used for transaction
// rows, TID lists, parity-constraint coefficients, and solution
// indicators. Sets of up to 128 bits live inline so the search hot loops
// (TID intersection, row reduction) never touch the allocator.
// Invariant: bits at positions >= size() are always zero.
class Bitset {
  static constexpr std::size_t kInlineWords = 2;

 public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits)
      : nbits_(nbits), nwords_((nbits + 63) / 64) {
    if (nwords_ > kInlineWords) big_.assign(nwords_, 0);
  }

  std::size_t size() const { return nbits_; }

  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (data()[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) {
    assert(i < nbits_);
    data()[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void set(std::size_t i, bool v) {
    if (v) set(i); else reset(i);
  }
  void reset(std::size_t i) {
    assert(i < nbits_);
    data()[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void clear() {
    std::uint64_t* w = data();
    for (std::size_t k = 0; k < nwords_; ++k) w[k] = 0;
  }

  bool any() const {
    const std::uint64_t* w = data();
    for (std::size_t k = 0; k < nwords_; ++k)
      if (w[k]) return true;
    return false;
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    const std::uint64_t* w = data();
    std::size_t n = 0;
    for (std::size_t k = 0; k < nwords_; ++k) n += std::size_t(std::popcount(w[k]));
    return n;
  }

  // popcount(*this & other) without materializing the intersection.
  std::size_t count_and(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    const std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    std::size_t n = 0;
    for (std::size_t k = 0; k < nwords_; ++k) n += std::size_t(std::popcount(a[k] & b[k]));
    return n;
  }

  // parity of popcount(*this & other); evaluates one parity constraint.
  bool parity_and(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    const std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < nwords_; ++k) acc ^= a[k] & b[k];
    return std::popcount(acc) & 1u;
  }

  bool is_subset_of(const Bitset& o) const {
    assert(nbits_ == o.nbits_);
    const std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    for (std::size_t k = 0; k < nwords_; ++k)
      if (a[k] & ~b[k]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    for (std::size_t k = 0; k < nwords_; ++k) a[k] &= b[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    for (std::size_t k = 0; k < nwords_; ++k) a[k] |= b[k];
    return *this;
  }
  Bitset& operator^=(const Bitset& o) {
    assert(nbits_ == o.nbits_);
    std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    for (std::size_t k = 0; k < nwords_; ++k) a[k] ^= b[k];
    return *this;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { a &= b; return a; }
  friend Bitset operator|(Bitset a, const Bitset& b) { a |= b; return a; }
  friend Bitset operator^(Bitset a, const Bitset& b) { a ^= b; return a; }

  bool operator==(const Bitset& o) const {
    if (nbits_ != o.nbits_) return false;
    const std::uint64_t* a = data();
    const std::uint64_t* b = o.data();
    for (std::size_t k = 0; k < nwords_; ++k)
      if (a[k] != b[k]) return false;
    return true;
  }
  bool operator!=(const Bitset& o) const { return !(*this == o); }

  // Index of the first set bit, or -1 if none.
  int find_first() const {
    const std::uint64_t* w = data();
    for (std::size_t k = 0; k < nwords_; ++k)
      if (w[k]) return int(k * 64 + std::size_t(std::countr_zero(w[k])));
    return -1;
  }

  // Index of the first set bit strictly after i, or -1.
  int find_next(int i) const {
    std::size_t j = std::size_t(i) + 1;
    if (j >= nbits_) return -1;
    const std::uint64_t* words = data();
    std::size_t k = j >> 6;
    std::uint64_t w = words[k] & (~std::uint64_t{0} << (j & 63));
    while (true) {
      if (w) return int(k * 64 + std::size_t(std::countr_zero(w)));
      if (++k == nwords_) return -1;
      w = words[k];
    }
  }

  std::vector<int> to_indices() const {
    std::vector<int> out;
    for (int i = find_first(); i >= 0; i = find_next(i)) out.push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  std::span<const std::uint64_t> words() const { return {data(), nwords_}; }

 private:
  const std::uint64_t* data() const {
    return nwords_ <= kInlineWords ? small_.data() : big_.data();
  }
  std::uint64_t* data() { return nwords_ <= kInlineWords ? small_.data() : big_.data(); }

  std::size_t nbits_ = 0;
  std::size_t nwords_ = 0;
  std::array<std::uint64_t, kInlineWords> small_{};
  std::vector<std::uint64_t> big_;
};

inline Bitset make_bitset(std::size_t nbits, std::initializer_list<int> bits) {
  Bitset b(nbits);
  for (int i : bits) b.set(std::size_t(i));
  return b;
}

}  // namespace flexics
