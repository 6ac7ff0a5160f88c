#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "flexics/cell.hpp"
#include "flexics/measures.hpp"
#include "flexics/rng.hpp"

namespace flexics {

// Error tolerance parameters. epsilon_kappa bounds the multiplicative
// deviation of per-pattern sampling probabilities from the target;
// lo/hi_thresh bound the total weight of a cell a sample may be drawn
// from. The threshold constants are calibrated so kappa = 0.9 yields the
// range [6.7, 49.4].
struct SamplerParams {
  double kappa = 0.9;
  double epsilon_kappa = 0.0;
  double lo_thresh = 0.0;
  double hi_thresh = 0.0;
  int pivot_est = 46;           // estimation cell cap (estimation error 0.8)
  int est_iterations = 17;      // estimate confidence 0.8
  int est_min_iterations = 9;   // earliest possible early stop
  int est_leapfrog_after = 3;   // later iterations start from the best count seen
  int max_extra_xors = 3;       // sampling phase never adds more than this
  int max_restarts = 10;        // empty-cell restarts per sample / iteration

  static SamplerParams from_kappa(double kappa);
  double pivot_samp() const;  // geometric mean of the thresholds
};

// (1+kappa)(2.36 + 0.51/(1-kappa)^2) - 1, kappa in (0,1).
double epsilon_of_kappa(double kappa);

// (lo, hi) cell-weight acceptance bounds for the sampling phase.
std::pair<double, double> thresholds(double kappa);

// Number of parity constraints that centers the expected cell weight on
// the geometric mean of the thresholds.
int initial_num_xors(double total_weight_estimate, double w_max_hat, const SamplerParams& params);

struct EstimationIteration {
  int iteration = 0;
  int n_xors = 0;
  double cell_weight = 0.0;
  double estimate = 0.0;
  int restarts = 0;
};

struct EstimationResult {
  double total_weight_estimate = 0.0;  // median over iterations
  int n_xor_initial = 0;
  double w_min_observed = 1.0;
  double w_max_hat = 1.0;  // min(1, w_min_observed * tilt_bound)
  std::vector<EstimationIteration> trace;
  bool converged_early = false;
};

struct SampleResult {
  bool success = false;
  Bitset item_vars;          // set iff success
  double quality = 0.0;
  double weight = 0.0;
  std::size_t cell_size = 0;
  double cell_weight = 0.0;
  int restarts = 0;
  double min_enumerated_weight = 1.0;  // over every solution seen by this attempt
};

struct SampleRun {
  EstimationResult estimation;
  std::vector<SampleResult> samples;  // one entry per requested sample
  std::size_t n_accepted = 0;
  std::size_t n_failures = 0;
  double w_min_observed = 1.0;  // refined further during sampling
};

// Exact weighted draw from a complete (untruncated, non-empty) cell.
const Solution& sample_exactly(const Cell& cell, Rng& rng);

// Two-phase sampler: one estimation pass derives the initial number of
// parity constraints, then each sample independently searches for a cell
// whose weight falls inside the acceptance band and draws exactly from
// it. Generation is deterministic per (seed, sample index) and safe to
// run in parallel.
class Sampler {
 public:
  Sampler(const BoundedOracle& oracle, const MeasureSpec& measure, SamplerParams params,
          std::uint64_t seed);

  const SamplerParams& params() const { return params_; }

  // Bounded-oracle invocations so far (cache hits excluded). The call
  // count grows with the tilt bound; useful for efficiency reports.
  std::uint64_t oracle_calls() const { return oracle_calls_.load(); }

  // Runs up to est_iterations rounds, each shrinking a random cell below
  // pivot_est * w_max_hat and scaling back by 2^(#constraints). Stops
  // early once the derived constraint count can no longer change. Throws
  // UnsatisfiableTaskError when the task has no solutions at all.
  EstimationResult estimate_total_weight();

  // One independent sampling attempt (failure is an outcome, not an
  // error). sample_index selects the random stream.
  SampleResult generate_one_sample(const EstimationResult& est, std::uint64_t sample_index) const;

  // Estimation plus n generation attempts, optionally on several threads;
  // results are merged in sample-index order.
  SampleRun sample_patterns(std::size_t n, int jobs = 1);

 private:
  double run_estimation_iteration(Rng& rng, int start_xors, EstimationIteration& info);

  // The zero-constraint cell is deterministic, so repeated samples that
  // fall back to it reuse one enumeration per cap value.
  std::shared_ptr<const Cell> solve_without_xors(double cap) const;

  const BoundedOracle* oracle_;
  MeasureSpec measure_;
  SamplerParams params_;
  std::uint64_t seed_;
  double w_min_observed_ = 1.0;

  mutable std::mutex cache_mu_;
  mutable std::map<double, std::shared_ptr<const Cell>> empty_xor_cells_;
  mutable std::atomic<std::uint64_t> oracle_calls_{0};

  double w_max_hat() const;
  void observe_cell(const Cell& cell);
};

}  // namespace flexics
