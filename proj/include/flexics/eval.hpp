#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flexics/cell.hpp"
#include "flexics/rng.hpp"

namespace flexics {

// Exact quality-proportional distribution over the fully enumerated
// solution set. Keys are canonical solution serializations.
struct TargetDistribution {
  std::vector<std::string> support;
  std::vector<double> probabilities;  // quality / z, aligned with support
  std::vector<double> qualities;
  double z = 0.0;
  std::unordered_map<std::string, std::size_t> index;  // key -> position

  std::size_t size() const { return support.size(); }
};

// Sample counts keyed like the target support.
struct EmpiricalDistribution {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const std::string& key, std::uint64_t n = 1) {
    counts[key] += n;
    total += n;
  }
  double probability(const std::string& key) const {
    auto it = counts.find(key);
    return (it == counts.end() || total == 0) ? 0.0 : double(it->second) / double(total);
  }
};

// Materializes every solution of the task (no parity constraints, no
// cap) and normalizes the qualities. Throws UnsatisfiableTaskError on an
// empty solution set.
TargetDistribution enumerate_all(const BoundedOracle& oracle);

// Builds a target from parallel (key, quality) pairs, e.g. read from an
// enumeration file.
TargetDistribution make_target(std::vector<std::string> keys, std::vector<double> qualities);

// n independent categorical draws from the target.
EmpiricalDistribution ideal_sample(const TargetDistribution& dist, Rng& rng, std::size_t n);

// Kullback-Leibler divergence in bits over aligned distributions;
// requires q(x) = 0 => p(x) = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Jensen-Shannon divergence in bits (base-2 logs, hence in [0,1]) between
// the target and the empirical distribution over the union support.
double js_divergence(const TargetDistribution& target, const EmpiricalDistribution& empirical);

// Both halves of the Jensen-Shannon sum: KL(T||M) and KL(E||M).
std::pair<double, double> js_divergence_parts(const TargetDistribution& target,
                                              const EmpiricalDistribution& empirical);

// Fraction of the target support whose empirical frequency lies within
// [target/factor, target*factor].
double factor_band_profile(const TargetDistribution& target, const EmpiricalDistribution& empirical,
                           double factor);

}  // namespace flexics
