#include "flexics/gf2.hpp"

#include <algorithm>
#include <sstream>

#include "flexics/util.hpp"

namespace flexics {

XorConstraint draw_random_xor(int num_vars, Rng& rng) {
  if (num_vars < 1) throw UsageError("num_vars must be >= 1");
  XorConstraint c;
  c.coefficients = Bitset(std::size_t(num_vars));
  for (int i = 0; i < num_vars; ++i)
    if (rng.next_bit()) c.coefficients.set(std::size_t(i));
  c.parity = rng.next_bit();
  return c;
}

bool check_full_assignment(std::span<const XorConstraint> constraints, const Bitset& assignment) {
  for (const auto& c : constraints)
    if (c.coefficients.parity_and(assignment) != c.parity) return false;
  return true;
}

Gf2System::Gf2System(int num_vars, std::span<const XorConstraint> constraints)
    : num_vars_(num_vars),
      stride_(std::size_t(num_vars + 63) / 64),
      assign_(std::size_t(num_vars), -1) {
  mat_.reserve(constraints.size() * stride_);
  rhs_.reserve(constraints.size());
  for (const auto& c : constraints) {
    if (int(c.coefficients.size()) != num_vars)
      throw UsageError("constraint width does not match variable count");
    auto words = c.coefficients.words();
    mat_.insert(mat_.end(), words.begin(), words.end());
    rhs_.push_back(c.parity ? 1 : 0);
    ++rows_;
  }
  PropagationOutcome out;
  reduce(out);
  conflict_ = out.conflict;
  initial_implied_ = std::move(out.implied);
}

void Gf2System::row_xor(std::size_t dst, std::size_t src) {
  std::uint64_t* d = &mat_[dst * stride_];
  const std::uint64_t* s = &mat_[src * stride_];
  for (std::size_t k = 0; k < stride_; ++k) d[k] ^= s[k];
  rhs_[dst] ^= rhs_[src];
}

void Gf2System::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(&mat_[a * stride_], &mat_[a * stride_] + stride_, &mat_[b * stride_]);
  std::swap(rhs_[a], rhs_[b]);
}

int Gf2System::row_lead(std::size_t r) const {
  const std::uint64_t* w = &mat_[r * stride_];
  for (std::size_t k = 0; k < stride_; ++k)
    if (w[k]) return int(k * 64 + std::size_t(std::countr_zero(w[k])));
  return -1;
}

int Gf2System::row_popcount(std::size_t r) const {
  const std::uint64_t* w = &mat_[r * stride_];
  int n = 0;
  for (std::size_t k = 0; k < stride_; ++k) n += std::popcount(w[k]);
  return n;
}

void Gf2System::substitute(int var, bool value) {
  for (std::size_t r = 0; r < rows_; ++r) {
    if (!row_bit(r, var)) continue;
    mat_[r * stride_ + std::size_t(var >> 6)] &= ~(std::uint64_t{1} << (var & 63));
    if (value) rhs_[r] ^= 1;
  }
}

// Gauss-Jordan pass followed by extraction: in reduced echelon form a
// leading column occurs in exactly one row, so a unit row forces its
// variable and dropping the row needs no further substitution elsewhere.
void Gf2System::reduce(PropagationOutcome& out) {
  std::size_t rank = 0;
  for (int col = 0; col < num_vars_ && rank < rows_; ++col) {
    std::size_t pivot = rows_;
    for (std::size_t r = rank; r < rows_; ++r) {
      if (row_bit(r, col)) { pivot = r; break; }
    }
    if (pivot == rows_) continue;
    swap_rows(pivot, rank);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != rank && row_bit(r, col)) row_xor(r, rank);
    }
    ++rank;
  }

  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_popcount(r) == 0 && rhs_[r]) {
      out.conflict = true;
      out.implied.clear();
      return;
    }
  }

  std::size_t keep = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    int pc = row_popcount(r);
    if (pc == 0) continue;  // zero row, dropped
    if (pc == 1) {
      int var = row_lead(r);
      assign_[std::size_t(var)] = std::int8_t(rhs_[r]);
      out.implied.emplace_back(var, rhs_[r] != 0);
      continue;  // consumed as an assignment
    }
    if (keep != r) {
      std::copy_n(&mat_[r * stride_], stride_, &mat_[keep * stride_]);
      rhs_[keep] = rhs_[r];
    }
    ++keep;
  }
  rows_ = keep;
  mat_.resize(rows_ * stride_);
  rhs_.resize(rows_);
}

PropagationOutcome Gf2System::assign_and_propagate(std::span<const std::pair<int, bool>> updates) {
  if (conflict_) throw UsageError("system is conflicted");
  for (const auto& [var, value] : updates) {
    if (var < 0 || var >= num_vars_) throw UsageError("variable out of range");
    if (!is_free(var)) throw UsageError("variable already assigned");
    assign_[std::size_t(var)] = value ? 1 : 0;
    substitute(var, value);
  }
  PropagationOutcome out;
  reduce(out);
  if (out.conflict) conflict_ = true;
  return out;
}

std::string Gf2System::debug_string() const {
  std::ostringstream s;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (int c = 0; c < num_vars_; ++c) {
      if (c) s << ' ';
      s << (row_bit(r, c) ? '1' : '0');
    }
    s << " | " << int(rhs_[r]) << '\n';
  }
  return s.str();
}

}  // namespace flexics
