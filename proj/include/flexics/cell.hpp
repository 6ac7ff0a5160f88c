#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "flexics/bitset.hpp"
#include "flexics/gf2.hpp"

namespace flexics {

// One solution of the constrained task: the indicator over all item
// variables (k*M bits for a k-pattern set, M bits for plain itemsets)
// plus its quality and scaled weight.
struct Solution {
  Bitset item_vars;
  double quality = 0.0;
  double weight = 0.0;
};

// Everything that survives the conjunction of the mining constraints and
// a parity-constraint system, possibly truncated once the accumulated
// weight exceeds the enumeration cap.
struct Cell {
  std::vector<Solution> solutions;
  double total_weight = 0.0;
  double min_weight = std::numeric_limits<double>::infinity();  // over enumerated solutions
  bool truncated = false;

  bool empty() const { return solutions.empty(); }
};

inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

// Bounded enumeration oracle: enumerates the solutions of the task
// intersected with the given parity constraints, stopping as soon as the
// running total weight exceeds the cap. Implementations are immutable and
// safe to share across threads.
class BoundedOracle {
 public:
  virtual ~BoundedOracle() = default;

  virtual Cell solve_bounded(std::span<const XorConstraint> xors, double weight_cap) const = 0;

  // Width of the parity constraints this oracle expects (= number of item
  // variables).
  virtual int xor_var_count() const = 0;

  // Number of constituent patterns per solution (1 for itemsets).
  virtual int patterns_per_solution() const { return 1; }
};

// Splits a composite item-variable indicator into its constituent
// patterns (k blocks of M bits each).
std::vector<Bitset> split_solution(const Bitset& item_vars, int k, int num_items);

// Canonical text key for a solution: sorted item ids, constituents in
// stored order separated by '|'. Stable across oracles.
std::string solution_key(const Bitset& item_vars, int k, int num_items);

}  // namespace flexics
