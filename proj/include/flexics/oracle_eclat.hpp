#pragma once

#include "flexics/cell.hpp"
#include "flexics/data.hpp"
#include "flexics/measures.hpp"

namespace flexics {

// Depth-first frequent-itemset enumeration over the vertical index,
// augmented with parity-constraint propagation. Supports the minimum
// frequency constraint only; never emits the empty itemset.
//
// Each search branch owns a clone of the parity system. Extending the
// prefix by item s assigns s = 1; candidate items skipped by the order or
// dropped as infrequent are assigned 0. Propagation can force further
// items into the prefix (TIDs are intersected and support re-checked) or
// out of the candidate set, and support drops feed back into propagation
// until a fixed point. A branch dies on a parity conflict or an
// infrequent prefix. A prefix is emitted iff the original constraints
// hold with every non-prefix item at 0.
class EclatOracle final : public BoundedOracle {
 public:
  EclatOracle(const TransactionDatabase& db, const VerticalIndex& index, int theta_abs,
              const MeasureSpec& measure);

  Cell solve_bounded(std::span<const XorConstraint> xors, double weight_cap) const override;
  int xor_var_count() const override { return db_->num_items; }

  int theta_abs() const { return theta_abs_; }

 private:
  const TransactionDatabase* db_;
  const VerticalIndex* index_;
  int theta_abs_;
  MeasureSpec measure_;
};

}  // namespace flexics
