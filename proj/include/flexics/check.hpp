#pragma once

#include <span>
#include <string>

#include "flexics/bitset.hpp"
#include "flexics/constraints.hpp"
#include "flexics/data.hpp"

namespace flexics {

// Definition-level validation of an emitted solution, independent of the
// enumeration machinery: support, closedness, length, non-emptiness and
// the pattern-set conditions are all recomputed from the raw rows.
struct CheckReport {
  bool ok = true;
  std::string violation;
};

CheckReport check_solution(const TransactionDatabase& db, const Constraints& constraints,
                           bool tiling, std::span<const Bitset> patterns);

}  // namespace flexics
