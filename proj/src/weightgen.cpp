#include "flexics/weightgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "flexics/util.hpp"

namespace flexics {

namespace {

// Threshold shapes are lo ~ (1+k)/k^2 and hi ~ (1+k)^3/k^2; the constants
// below calibrate them to the reference point kappa = 0.9 -> [6.7, 49.4].
constexpr double kLoConst = 6.7 * (0.9 * 0.9) / 1.9;
constexpr double kHiConst = 49.4 * (0.9 * 0.9) / (1.9 * 1.9 * 1.9);

void check_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw ConfigError("kappa must lie in (0,1), got " + std::to_string(kappa));
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) throw UsageError("median of empty sequence");
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double epsilon_of_kappa(double kappa) {
  check_kappa(kappa);
  const double d = 1.0 - kappa;
  return (1.0 + kappa) * (2.36 + 0.51 / (d * d)) - 1.0;
}

std::pair<double, double> thresholds(double kappa) {
  check_kappa(kappa);
  const double k2 = kappa * kappa;
  const double lo = kLoConst * (1.0 + kappa) / k2;
  const double hi = kHiConst * (1.0 + kappa) * (1.0 + kappa) * (1.0 + kappa) / k2;
  return {lo, hi};
}

SamplerParams SamplerParams::from_kappa(double kappa) {
  SamplerParams p;
  p.kappa = kappa;
  p.epsilon_kappa = epsilon_of_kappa(kappa);
  std::tie(p.lo_thresh, p.hi_thresh) = thresholds(kappa);
  return p;
}

double SamplerParams::pivot_samp() const { return std::sqrt(lo_thresh * hi_thresh); }

int initial_num_xors(double total_weight_estimate, double w_max_hat, const SamplerParams& params) {
  if (!(total_weight_estimate > 0.0)) throw UsageError("estimate must be positive");
  const double ratio = total_weight_estimate / (w_max_hat * params.pivot_samp());
  const long n = std::lround(std::log2(ratio));
  return int(std::max(0L, n));
}

const Solution& sample_exactly(const Cell& cell, Rng& rng) {
  if (cell.truncated) throw UsageError("cannot sample from a truncated cell");
  if (cell.solutions.empty() || !(cell.total_weight > 0.0))
    throw UsageError("cannot sample from an empty cell");
  const double target = rng.next_unit() * cell.total_weight;
  double acc = 0.0;
  for (const auto& s : cell.solutions) {
    acc += s.weight;
    if (target < acc) return s;
  }
  return cell.solutions.back();  // guard against accumulated rounding
}

Sampler::Sampler(const BoundedOracle& oracle, const MeasureSpec& measure, SamplerParams params,
                 std::uint64_t seed)
    : oracle_(&oracle), measure_(measure), params_(params), seed_(seed) {}

std::shared_ptr<const Cell> Sampler::solve_without_xors(double cap) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = empty_xor_cells_.find(cap);
    if (it != empty_xor_cells_.end()) return it->second;
  }
  oracle_calls_.fetch_add(1);
  auto cell = std::make_shared<const Cell>(oracle_->solve_bounded({}, cap));
  std::lock_guard<std::mutex> lock(cache_mu_);
  return empty_xor_cells_.emplace(cap, std::move(cell)).first->second;
}

double Sampler::w_max_hat() const {
  return std::min(1.0, w_min_observed_ * measure_.tilt_bound);
}

void Sampler::observe_cell(const Cell& cell) {
  if (!cell.solutions.empty()) w_min_observed_ = std::min(w_min_observed_, cell.min_weight);
}

// One iteration: fresh constraints from start_xors, then one more at a
// time until the cell fits under pivot_est * w_max_hat; the cell weight
// scaled by 2^(#constraints) estimates the total. An empty cell restarts
// the iteration with fresh constraints (falling back to zero constraints
// after a few tries).
double Sampler::run_estimation_iteration(Rng& rng, int start_xors, EstimationIteration& info) {
  const int num_vars = oracle_->xor_var_count();
  for (int restart = 0;; ++restart) {
    if (restart > params_.max_restarts)
      throw UnsatisfiableTaskError("estimation kept hitting empty cells");
    info.restarts = restart;
    const int base = restart >= 3 ? 0 : start_xors;
    std::vector<XorConstraint> xors;
    xors.reserve(std::size_t(base));
    for (int i = 0; i < base; ++i) xors.push_back(draw_random_xor(num_vars, rng));
    while (true) {
      const double cap = double(params_.pivot_est) * w_max_hat();
      Cell local;
      const Cell* cell;
      std::shared_ptr<const Cell> cached;
      if (xors.empty()) {
        cached = solve_without_xors(cap);
        cell = cached.get();
      } else {
        oracle_calls_.fetch_add(1);
        local = oracle_->solve_bounded(xors, cap);
        cell = &local;
      }
      observe_cell(*cell);
      if (cell->truncated) {
        xors.push_back(draw_random_xor(num_vars, rng));
        continue;
      }
      if (cell->empty()) {
        if (xors.empty()) throw UnsatisfiableTaskError("the constrained task has no solutions");
        break;  // restart with fresh constraints
      }
      info.n_xors = int(xors.size());
      info.cell_weight = cell->total_weight;
      info.estimate = cell->total_weight * std::exp2(double(xors.size()));
      return info.estimate;
    }
  }
}

EstimationResult Sampler::estimate_total_weight() {
  Rng rng = Rng::derive(seed_, 0);
  EstimationResult result;
  std::vector<double> estimates;
  int smallest_xors = -1;

  for (int it = 0; it < params_.est_iterations; ++it) {
    EstimationIteration info;
    info.iteration = it;
    const int start = (it >= params_.est_leapfrog_after && smallest_xors > 0) ? smallest_xors : 0;
    const double est = run_estimation_iteration(rng, start, info);
    estimates.push_back(est);
    result.trace.push_back(info);
    smallest_xors = smallest_xors < 0 ? info.n_xors : std::min(smallest_xors, info.n_xors);

    // The initial constraint count depends only on the median estimate.
    // Once the running order statistics pin the count regardless of the
    // remaining iterations, further iterations cannot change it.
    const int done = it + 1;
    if (done >= params_.est_min_iterations && done < params_.est_iterations) {
      const int remaining = params_.est_iterations - done;
      const int med_pos = params_.est_iterations / 2;  // 0-based final median index
      std::vector<double> sorted = estimates;
      std::sort(sorted.begin(), sorted.end());
      const int lo_idx = med_pos - remaining;
      if (lo_idx >= 0) {
        const double wmh = w_max_hat();
        const int n_lo = initial_num_xors(sorted[std::size_t(lo_idx)], wmh, params_);
        const int n_hi = initial_num_xors(sorted[std::size_t(med_pos)], wmh, params_);
        if (n_lo == n_hi) {
          result.converged_early = true;
          break;
        }
      }
    }
  }

  result.total_weight_estimate = median(estimates);
  result.w_min_observed = w_min_observed_;
  result.w_max_hat = w_max_hat();
  result.n_xor_initial = initial_num_xors(result.total_weight_estimate, result.w_max_hat, params_);
  return result;
}

// Cell search per sample: start one constraint above the estimate
// (leapfrog), enlarge a too-small cell by dropping that constraint once,
// shrink a too-large cell by adding up to two more; an empty cell
// restarts the attempt with fresh constraints.
SampleResult Sampler::generate_one_sample(const EstimationResult& est,
                                          std::uint64_t sample_index) const {
  Rng rng = Rng::derive(seed_, 1 + sample_index);
  const int num_vars = oracle_->xor_var_count();
  const double lo_w = params_.lo_thresh * est.w_max_hat;
  const double hi_w = params_.hi_thresh * est.w_max_hat;

  SampleResult result;
  for (int restart = 0; restart <= params_.max_restarts; ++restart) {
    result.restarts = restart;
    std::vector<XorConstraint> xors;
    xors.reserve(std::size_t(est.n_xor_initial) + 1);
    for (int i = 0; i < est.n_xor_initial + 1; ++i)
      xors.push_back(draw_random_xor(num_vars, rng));

    bool removed_leapfrog = false;
    int additions = 0;
    while (true) {
      Cell local;
      const Cell* cell;
      std::shared_ptr<const Cell> cached;
      if (xors.empty()) {
        cached = solve_without_xors(hi_w);
        cell = cached.get();
      } else {
        oracle_calls_.fetch_add(1);
        local = oracle_->solve_bounded(xors, hi_w);
        cell = &local;
      }
      if (!cell->solutions.empty())
        result.min_enumerated_weight = std::min(result.min_enumerated_weight, cell->min_weight);
      if (cell->empty() && !cell->truncated) break;  // restart with fresh constraints
      if (cell->truncated) {                         // too large
        if (additions >= params_.max_extra_xors - 1) return result;
        xors.push_back(draw_random_xor(num_vars, rng));
        ++additions;
        continue;
      }
      if (cell->total_weight < lo_w) {  // too small
        if (removed_leapfrog || additions > 0 || xors.empty()) return result;
        xors.pop_back();
        removed_leapfrog = true;
        continue;
      }
      const Solution& pick = sample_exactly(*cell, rng);
      result.success = true;
      result.item_vars = pick.item_vars;
      result.quality = pick.quality;
      result.weight = pick.weight;
      result.cell_size = cell->solutions.size();
      result.cell_weight = cell->total_weight;
      return result;
    }
  }
  return result;  // restarts exhausted
}

SampleRun Sampler::sample_patterns(std::size_t n, int jobs) {
  SampleRun run;
  run.estimation = estimate_total_weight();
  run.samples.resize(n);

  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> w_min_bits{std::bit_cast<std::uint64_t>(w_min_observed_)};

  auto worker = [&]() {
    double local_min = 1.0;
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      run.samples[i] = generate_one_sample(run.estimation, i);
      local_min = std::min(local_min, run.samples[i].min_enumerated_weight);
    }
    std::uint64_t cur = w_min_bits.load();
    while (std::bit_cast<double>(cur) > local_min &&
           !w_min_bits.compare_exchange_weak(cur, std::bit_cast<std::uint64_t>(local_min))) {
    }
  };

  const int n_threads = std::max(1, jobs);
  if (n_threads == 1 || n == 0) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int j = 0; j < n_threads; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  w_min_observed_ = std::min(w_min_observed_, std::bit_cast<double>(w_min_bits.load()));
  run.w_min_observed = w_min_observed_;
  for (const auto& s : run.samples) {
    if (s.success) ++run.n_accepted; else ++run.n_failures;
  }
  return run;
}

}  // namespace flexics
