#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flexics/bitset.hpp"
#include "flexics/rng.hpp"

namespace flexics {

// Single parity constraint over binary variables: the XOR of the selected
// variables must equal the parity bit.
struct XorConstraint {
  Bitset coefficients;  // one bit per variable
  bool parity = false;
};

// Fresh constraint with every coefficient and the parity bit drawn as an
// independent fair coin flip.
XorConstraint draw_random_xor(int num_vars, Rng& rng);

// True iff the full 0/1 assignment satisfies every constraint.
bool check_full_assignment(std::span<const XorConstraint> constraints, const Bitset& assignment);

struct PropagationOutcome {
  std::vector<std::pair<int, bool>> implied;  // newly forced (variable, value)
  bool conflict = false;
};

// System of parity constraints kept in reduced row echelon form over F2.
// Variable assignments are substituted into every row as soon as they are
// recorded; a row reduced to a single free variable forces that variable,
// and a row with empty coefficients and right-hand side 1 is a conflict.
//
// Rows are stored as a flat word matrix so that per-branch clones are a
// couple of memcpys. Zero rows (rhs 0) are dropped eagerly. A conflicted
// system rejects all further updates; clone and inspection stay allowed.
class Gf2System {
 public:
  Gf2System(int num_vars, std::span<const XorConstraint> constraints);

  int num_vars() const { return num_vars_; }
  int num_rows() const { return int(rows_); }
  bool conflicted() const { return conflict_; }

  // -1 = free, otherwise the assigned value.
  int assignment(int var) const { return assign_[std::size_t(var)]; }
  bool is_free(int var) const { return assign_[std::size_t(var)] < 0; }

  // Assignments forced while constructing / last propagating, in the order
  // they were derived.
  const std::vector<std::pair<int, bool>>& initial_implied() const { return initial_implied_; }

  // Substitutes the updates, re-echelonizes and returns everything newly
  // forced (transitively) or a conflict. Updated variables must be free.
  PropagationOutcome assign_and_propagate(std::span<const std::pair<int, bool>> updates);

  // Debug form: one line per stored row, "c1 c2 ... cn | rhs".
  std::string debug_string() const;

 private:
  bool row_bit(std::size_t r, int c) const {
    return (mat_[r * stride_ + std::size_t(c >> 6)] >> (c & 63)) & 1u;
  }
  void row_xor(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);
  int row_lead(std::size_t r) const;        // column of first set bit, -1 if empty
  int row_popcount(std::size_t r) const;
  void substitute(int var, bool value);     // clear column, flip rhs where set
  void reduce(PropagationOutcome& out);     // RREF + forced vars + conflict + drop zero rows

  int num_vars_ = 0;
  std::size_t stride_ = 0;  // words per row
  std::size_t rows_ = 0;
  std::vector<std::uint64_t> mat_;  // rows_ x stride_
  std::vector<std::uint8_t> rhs_;
  std::vector<std::int8_t> assign_;
  bool conflict_ = false;
  std::vector<std::pair<int, bool>> initial_implied_;
};

inline Gf2System build_system(int num_vars, std::span<const XorConstraint> constraints) {
  return Gf2System(num_vars, constraints);
}

}  // namespace flexics
