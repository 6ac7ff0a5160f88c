#pragma once

#include "flexics/cell.hpp"
#include "flexics/constraints.hpp"
#include "flexics/data.hpp"
#include "flexics/measures.hpp"

namespace flexics {

// Constraint network for mining k patterns at once: k*M binary item
// variables and k*N binary transaction variables, linked per copy by the
// coverage constraint. Solutions are read off the item variables; the
// transaction variables are functionally determined.
struct MiningCsp {
  const TransactionDatabase* db = nullptr;
  int k = 1;
  Constraints constraints;     // applied to every pattern copy
  bool no_overlap = false;     // disjoint item sets and disjoint covers
  bool lex_symmetry = false;   // cover of pattern 1 lexicographically >= pattern 2

  int num_items() const { return db->num_items; }
  int num_transactions() const { return db->num_transactions; }
  int item_var(int copy, int item) const { return copy * num_items() + item; }
  int trans_var(int copy, int t) const { return k * num_items() + copy * num_transactions() + t; }
  int num_item_vars() const { return k * num_items(); }
  int num_vars() const { return k * (num_items() + num_transactions()); }
};

// Single-itemset task: coverage + minfreq (+ closed) (+ minlen) + nonempty.
MiningCsp build_itemset_csp(const TransactionDatabase& db, const Constraints& constraints);

// Non-overlapping 2-tiling task: both copies get coverage, minfreq,
// closed, minlen and nonempty; plus disjointness of items and covers and
// the lexicographic tie-break on covers.
MiningCsp build_tiling_csp(const TransactionDatabase& db, const Constraints& constraints);

// Domains of all variables plus the parity system over the item
// variables. -1 = free. The one/zero masks per pattern copy are
// maintained incrementally with every assignment; the trail records
// assignment order so branches undo in O(#assignments).
struct SearchState {
  std::vector<std::int8_t> dom;
  std::vector<std::uint64_t> masks;  // per copy: items 1s/0s, transactions 1s/0s
  std::vector<int> trail;
  Gf2System xors;
  bool conflict = false;
};

enum class FixpointResult { consistent, conflict };

// Depth-first search with propagators run to fixpoint before every
// branching decision. Branches on the lowest-indexed free item variable,
// value 1 first.
class CpOracle final : public BoundedOracle {
 public:
  CpOracle(const MiningCsp& csp, const MeasureSpec& measure);

  Cell solve_bounded(std::span<const XorConstraint> xors, double weight_cap) const override;
  int xor_var_count() const override { return csp_.num_item_vars(); }
  int patterns_per_solution() const override { return csp_.k; }

  const MiningCsp& csp() const { return csp_; }

  // Exposed for tests: root state construction, single assignment, and
  // the propagation fixpoint itself.
  SearchState make_root_state(std::span<const XorConstraint> xors) const;
  FixpointResult propagate_to_fixpoint(SearchState& state) const;
  FixpointResult assign(SearchState& state, int var, bool value) const;

 private:
  struct Enumeration;
  void dfs(SearchState& state, int from_var, bool track_xors, Enumeration& run) const;
  void emit(const SearchState& state, Enumeration& run) const;
  void undo_to(SearchState& state, std::size_t mark) const;
  bool set_var(SearchState& state, int var, bool value, bool& changed) const;

  // mask views into SearchState::masks
  std::uint64_t* items_one(SearchState& s, int c) const;
  std::uint64_t* items_zero(SearchState& s, int c) const;
  std::uint64_t* trans_one(SearchState& s, int c) const;
  std::uint64_t* trans_zero(SearchState& s, int c) const;

  MiningCsp csp_;
  MeasureSpec measure_;
  std::size_t iw_ = 0;  // words per item mask
  std::size_t tw_ = 0;  // words per transaction mask
  std::vector<std::uint64_t> outside_;  // per transaction: items NOT in it
  std::vector<std::uint64_t> miss_;     // per item: transactions NOT containing it
};

}  // namespace flexics
