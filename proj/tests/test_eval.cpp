#include "flexics/eval.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "flexics/oracle_eclat.hpp"
#include "flexics/util.hpp"

using namespace flexics;

namespace {

EmpiricalDistribution from_counts(std::initializer_list<std::pair<const char*, uint64_t>> pairs) {
  EmpiricalDistribution e;
  for (const auto& [key, count] : pairs) e.add(key, count);
  return e;
}

}  // namespace

TEST_CASE("enumeration builds the exact target") {
  auto db = parse_fimi_text("0 1\n0 1\n2\n");
  auto index = build_vertical_index(db);
  auto cons = Constraints::from_fraction(0.5, db.num_transactions);
  auto measure = measure_spec(MeasureKind::freq, db, cons);
  EclatOracle oracle(db, index, cons.minfreq_abs, measure);

  auto target = enumerate_all(oracle);
  CHECK(target.size() == 3);
  CHECK(target.z == doctest::Approx(6.0));  // 2 + 2 + 2
  for (double p : target.probabilities) CHECK(p == doctest::Approx(1.0 / 3));

  auto uniform = measure_spec(MeasureKind::uniform, db, cons);
  EclatOracle oracle_u(db, index, cons.minfreq_abs, uniform);
  auto target_u = enumerate_all(oracle_u);
  for (double p : target_u.probabilities) CHECK(p == doctest::Approx(1.0 / 3));

  // probabilities sum to one
  double sum = 0;
  for (double p : target.probabilities) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty support is unsatisfiable") {
  CHECK_THROWS_AS(make_target({}, {}), UnsatisfiableTaskError);
}

TEST_CASE("ideal sampler basics") {
  auto dist = make_target({"a", "b"}, {1.0, 3.0});
  Rng rng(5);
  auto none = ideal_sample(dist, rng, 0);
  CHECK(none.total == 0);

  auto single = make_target({"only"}, {2.0});
  auto all = ideal_sample(single, rng, 100);
  CHECK(all.counts.at("only") == 100);

  auto many = ideal_sample(dist, rng, 40000);
  CHECK(double(many.counts.at("a")) == doctest::Approx(10000).epsilon(0.04));  // +- 400
}

TEST_CASE("divergence formulas on known values") {
  std::vector<double> p{0.75, 0.25}, q{0.5, 0.5};
  CHECK(kl_divergence(p, q) == doctest::Approx(0.1887).epsilon(0.001));

  std::vector<double> same{0.5, 0.5};
  CHECK(kl_divergence(same, same) == doctest::Approx(0.0));

  std::vector<double> point{1.0, 0.0};
  CHECK(kl_divergence(point, q) == doctest::Approx(1.0));

  std::vector<double> broken{0.5, 0.5}, zero{1.0, 0.0};
  CHECK_THROWS_AS(kl_divergence(broken, zero), UsageError);
}

TEST_CASE("mixture divergence on known values") {
  auto target = make_target({"x", "y"}, {1.0, 1.0});
  auto emp = from_counts({{"x", 1}, {"y", 1}});
  CHECK(js_divergence(target, emp) == doctest::Approx(0.0).epsilon(1e-12));

  auto point = make_target({"x"}, {1.0});
  auto elsewhere = from_counts({{"z", 10}});
  CHECK(js_divergence(point, elsewhere) == doctest::Approx(1.0));

  auto half = from_counts({{"x", 1}, {"z", 1}});
  CHECK(js_divergence(point, half) == doctest::Approx(0.3113).epsilon(0.001));
}

TEST_CASE("mixture divergence is symmetric and bounded") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + int(rng.next_below(5));
    std::vector<std::string> keys;
    std::vector<double> qa;
    EmpiricalDistribution eb;
    for (int i = 0; i < k; ++i) {
      keys.push_back(std::to_string(i));
      qa.push_back(0.05 + rng.next_unit());
      eb.add(keys.back(), 1 + rng.next_below(20));
    }
    auto ta = make_target(keys, qa);
    // symmetry: swap roles by building the mirrored pair
    std::vector<double> qb;
    for (const auto& key : keys) qb.push_back(double(eb.counts.at(key)));
    auto tb = make_target(keys, qb);
    EmpiricalDistribution ea;
    for (size_t i = 0; i < keys.size(); ++i)
      ea.add(keys[i], uint64_t(std::lround(qa[i] * 1000000)));

    const double ab = js_divergence(ta, eb);
    const double ba = js_divergence(tb, ea);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == doctest::Approx(ba).epsilon(0.001));
  }
}

TEST_CASE("factor band profile") {
  auto target = make_target({"a", "b"}, {1.0, 1.0});
  auto matched = from_counts({{"a", 5}, {"b", 5}});
  CHECK(factor_band_profile(target, matched, 2.0) == doctest::Approx(1.0));

  auto missing_half = from_counts({{"a", 10}});
  CHECK(factor_band_profile(target, missing_half, 2.0) <= 0.5);

  CHECK_THROWS_AS(factor_band_profile(target, matched, 1.0), UsageError);
}

TEST_CASE("ideal sampling at a million draws stays inside factor two") {
  const int support = 1000;
  std::vector<std::string> keys;
  std::vector<double> qualities;
  for (int i = 0; i < support; ++i) {
    keys.push_back(std::to_string(i));
    qualities.push_back(1.0);
  }
  auto target = make_target(keys, qualities);
  Rng rng(123);
  auto emp = ideal_sample(target, rng, 1000000);
  CHECK(factor_band_profile(target, emp, 2.0) >= 0.99);
}

TEST_CASE("ideal sampler converges as draws grow") {
  std::vector<std::string> keys;
  std::vector<double> qualities;
  for (int i = 0; i < 50; ++i) {
    keys.push_back(std::to_string(i));
    qualities.push_back(1.0 + (i % 7));
  }
  auto target = make_target(keys, qualities);

  std::vector<double> js_by_n;
  for (size_t n : {1000ul, 10000ul, 100000ul}) {
    std::vector<double> js_runs;
    for (uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(900 + seed);
      js_runs.push_back(js_divergence(target, ideal_sample(target, rng, n)));
    }
    std::sort(js_runs.begin(), js_runs.end());
    js_by_n.push_back(js_runs[2]);  // median over seeds
  }
  CHECK(js_by_n[0] > js_by_n[1]);
  CHECK(js_by_n[1] > js_by_n[2]);
}
