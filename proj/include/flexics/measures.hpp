#pragma once

#include <span>
#include <string>

#include "flexics/bitset.hpp"
#include "flexics/constraints.hpp"
#include "flexics/data.hpp"

namespace flexics {

enum class MeasureKind { uniform, freq, purity, area };

// A quality measure together with the scaling constant that maps
// qualities into (0,1] weights and an upper bound on the weight tilt
// (max weight / min weight over solutions). The tilt bound only affects
// sampler efficiency, never correctness.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::uniform;
  double scaling_constant = 1.0;  // C >= max achievable quality
  double tilt_bound = 1.0;        // r_hat >= 1
  double quality_scale = 1.0;     // rescales qualities (C must be scaled along)
};

MeasureKind parse_measure_kind(const std::string& token);
std::string measure_kind_name(MeasureKind kind);

// Scaling constant and tilt bound for a measure on a given task:
//   uniform: C = 1,            r = 1
//   freq:    C = N,            r = 1/theta
//   purity:  C = 1,            r = 2
//   area:    C = total ones,   r = C / (2 * (N*theta) * minlen)
MeasureSpec measure_spec(MeasureKind kind, const TransactionDatabase& db,
                         const Constraints& constraints);

// Quality of a single itemset. Purity requires labels and nonzero support.
double evaluate_quality(const MeasureSpec& spec, const TransactionDatabase& db,
                        const Bitset& itemset);

// Quality of a pattern set: sum over constituents of freq * size for the
// area measure, 1 for uniform.
double evaluate_quality(const MeasureSpec& spec, const TransactionDatabase& db,
                        std::span<const Bitset> patterns);

// quality / C, in (0,1]. Qualities above C violate the C contract.
double weight(const MeasureSpec& spec, double quality);

}  // namespace flexics
