#include "flexics/eval.hpp"

#include <algorithm>
#include <cmath>

#include "flexics/util.hpp"

namespace flexics {

TargetDistribution make_target(std::vector<std::string> keys, std::vector<double> qualities) {
  if (keys.size() != qualities.size()) throw UsageError("keys and qualities differ in length");
  if (keys.empty()) throw UnsatisfiableTaskError("the constrained task has no solutions");
  TargetDistribution dist;
  dist.support = std::move(keys);
  dist.qualities = std::move(qualities);
  KahanSum z;
  for (double q : dist.qualities) {
    if (!(q > 0.0)) throw UsageError("qualities must be positive");
    z.add(q);
  }
  dist.z = z.value();
  dist.probabilities.resize(dist.qualities.size());
  for (std::size_t i = 0; i < dist.qualities.size(); ++i)
    dist.probabilities[i] = dist.qualities[i] / dist.z;
  dist.index.reserve(dist.support.size());
  for (std::size_t i = 0; i < dist.support.size(); ++i) dist.index.emplace(dist.support[i], i);
  if (dist.index.size() != dist.support.size()) throw UsageError("duplicate solution keys");
  return dist;
}

TargetDistribution enumerate_all(const BoundedOracle& oracle) {
  Cell cell = oracle.solve_bounded({}, kNoCap);
  const int k = oracle.patterns_per_solution();
  const int m = oracle.xor_var_count() / k;
  std::vector<std::string> keys;
  std::vector<double> qualities;
  keys.reserve(cell.solutions.size());
  qualities.reserve(cell.solutions.size());
  for (const auto& s : cell.solutions) {
    keys.push_back(solution_key(s.item_vars, k, m));
    qualities.push_back(s.quality);
  }
  return make_target(std::move(keys), std::move(qualities));
}

EmpiricalDistribution ideal_sample(const TargetDistribution& dist, Rng& rng, std::size_t n) {
  std::vector<double> cumulative(dist.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    acc += dist.probabilities[i];
    cumulative[i] = acc;
  }
  EmpiricalDistribution emp;
  for (std::size_t draw = 0; draw < n; ++draw) {
    const double u = rng.next_unit() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx =
        std::min(std::size_t(it - cumulative.begin()), dist.support.size() - 1);
    emp.add(dist.support[idx]);
  }
  return emp;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw UsageError("distributions differ in length");
  KahanSum sum;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 * log(0/q) = 0
    if (q[i] == 0.0) throw UsageError("absolute continuity violated: q=0 where p>0");
    sum.add(p[i] * std::log2(p[i] / q[i]));
  }
  return sum.value();
}

std::pair<double, double> js_divergence_parts(const TargetDistribution& target,
                                              const EmpiricalDistribution& empirical) {
  // Union support: target order first, then empirical-only keys.
  std::vector<double> pt, pe;
  pt.reserve(target.size());
  pe.reserve(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    pt.push_back(target.probabilities[i]);
    pe.push_back(empirical.probability(target.support[i]));
  }
  for (const auto& [key, count] : empirical.counts) {
    if (target.index.count(key)) continue;
    pt.push_back(0.0);
    pe.push_back(empirical.total ? double(count) / double(empirical.total) : 0.0);
  }
  std::vector<double> mix(pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) mix[i] = 0.5 * (pt[i] + pe[i]);
  return {kl_divergence(pt, mix), kl_divergence(pe, mix)};
}

double js_divergence(const TargetDistribution& target, const EmpiricalDistribution& empirical) {
  auto [kl_t, kl_e] = js_divergence_parts(target, empirical);
  return 0.5 * (kl_t + kl_e);
}

double factor_band_profile(const TargetDistribution& target,
                           const EmpiricalDistribution& empirical, double factor) {
  if (!(factor > 1.0)) throw UsageError("factor must exceed 1");
  if (target.size() == 0) return 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double t = target.probabilities[i];
    const double e = empirical.probability(target.support[i]);
    if (e >= t / factor && e <= t * factor) ++inside;
  }
  return double(inside) / double(target.size());
}

}  // namespace flexics
