#include "flexics/oracle_cp.hpp"

#include <set>

#include "brute.hpp"
#include "doctest.h"
#include "flexics/oracle_eclat.hpp"

using namespace flexics;

namespace {

std::set<std::string> keys_of(const Cell& cell, int k, int num_items) {
  std::set<std::string> out;
  for (const auto& s : cell.solutions) out.insert(solution_key(s.item_vars, k, num_items));
  return out;
}

}  // namespace

TEST_CASE("coverage forces transaction variables both ways") {
  auto db = parse_fimi_text("0 1\n1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions);
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));

  SearchState s = oracle.make_root_state({});
  const MiningCsp& csp = oracle.csp();
  // fix the pattern to exactly {0}
  REQUIRE(oracle.assign(s, csp.item_var(0, 0), true) == FixpointResult::consistent);
  REQUIRE(oracle.assign(s, csp.item_var(0, 1), false) == FixpointResult::consistent);
  CHECK(s.dom[size_t(csp.trans_var(0, 0))] == 1);
  CHECK(s.dom[size_t(csp.trans_var(0, 1))] == 0);
}

TEST_CASE("minfreq fails when too few transactions remain coverable") {
  auto db = parse_fimi_text("0\n1\n");
  auto cons = Constraints::from_fraction(1.0, db.num_transactions);  // needs both rows
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));
  SearchState s = oracle.make_root_state({});
  // including item 0 uncovers row 1: dead end
  CHECK(oracle.assign(s, oracle.csp().item_var(0, 0), true) == FixpointResult::conflict);
}

TEST_CASE("closedness extends the pattern during propagation") {
  auto db = parse_fimi_text("0 1\n0 1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions, true);
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));
  SearchState s = oracle.make_root_state({});
  REQUIRE(oracle.assign(s, oracle.csp().item_var(0, 0), true) == FixpointResult::consistent);
  CHECK(s.dom[size_t(oracle.csp().item_var(0, 1))] == 1);
}

TEST_CASE("closed task keeps only closed itemsets") {
  auto db = parse_fimi_text("0 1\n0 1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions, true);
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));
  Cell cell = oracle.solve_bounded({}, kNoCap);
  CHECK(keys_of(cell, 1, 2) == std::set<std::string>{"0,1"});
}

TEST_CASE("minlen removes short itemsets") {
  auto db = parse_fimi_text("0 1 2\n0 1\n0 2\n");
  auto cons = Constraints::from_fraction(0.3, db.num_transactions, false, 2);
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));
  Cell cell = oracle.solve_bounded({}, kNoCap);
  for (const auto& s : cell.solutions) CHECK(s.item_vars.count() >= 2);
  CHECK(keys_of(cell, 1, 3) == brute::itemsets(db, cons, {}));
}

TEST_CASE("builder rejects out-of-range parameters") {
  auto db = parse_fimi_text("0 1\n0\n");
  Constraints bad;
  bad.minfreq_fraction = 0.5;
  bad.minfreq_abs = 3;  // > N
  CHECK_THROWS_AS(build_itemset_csp(db, bad), ConfigError);
  Constraints long_len = Constraints::from_fraction(0.5, 2, false, 5);
  CHECK_THROWS_AS(build_itemset_csp(db, long_len), ConfigError);
  Constraints no_len = Constraints::from_fraction(0.5, 2);
  CHECK_THROWS_AS(build_tiling_csp(db, no_len), ConfigError);
}

TEST_CASE("itemset search equals brute force across constraint mixes") {
  Rng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 5 + int(rng.next_below(5));   // 5..9 items
    const int n = 8 + int(rng.next_below(23));  // 8..30 transactions
    auto db = generate_synthetic_db(m, n, 0.4, 31000 + uint64_t(trial));
    const int theta_abs = 1 + int(rng.next_below(uint64_t(n / 4 + 1)));
    const bool use_closed = rng.next_bit();
    const int minlen = rng.next_bit() ? 1 + int(rng.next_below(2)) : 0;
    Constraints cons;
    cons.minfreq_fraction = double(theta_abs) / n;
    cons.minfreq_abs = theta_abs;
    cons.closed = use_closed;
    cons.minlen = minlen;

    std::vector<XorConstraint> xors;
    for (int i = 0, k = int(rng.next_below(4)); i < k; ++i)
      xors.push_back(draw_random_xor(m, rng));

    auto measure = measure_spec(MeasureKind::uniform, db, cons);
    CpOracle oracle(build_itemset_csp(db, cons), measure);
    Cell cell = oracle.solve_bounded(xors, kNoCap);
    CHECK(keys_of(cell, 1, m) == brute::itemsets(db, cons, xors));
  }
}

TEST_CASE("cp and eclat agree on minfreq-only tasks") {
  Rng rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 5 + int(rng.next_below(6));
    const int n = 10 + int(rng.next_below(21));
    auto db = generate_synthetic_db(m, n, 0.35, 5150 + uint64_t(trial));
    auto index = build_vertical_index(db);
    const int theta_abs = 1 + int(rng.next_below(uint64_t(n / 4 + 1)));
    Constraints cons;
    cons.minfreq_fraction = double(theta_abs) / n;
    cons.minfreq_abs = theta_abs;
    auto measure = measure_spec(MeasureKind::freq, db, cons);

    std::vector<XorConstraint> xors;
    for (int i = 0, k = int(rng.next_below(3)); i < k; ++i)
      xors.push_back(draw_random_xor(m, rng));

    EclatOracle eclat(db, index, theta_abs, measure);
    CpOracle cp(build_itemset_csp(db, cons), measure);
    Cell a = eclat.solve_bounded(xors, kNoCap);
    Cell b = cp.solve_bounded(xors, kNoCap);
    CHECK(keys_of(a, 1, m) == keys_of(b, 1, m));
    CHECK(a.total_weight == doctest::Approx(b.total_weight));
  }
}

TEST_CASE("two disjoint blocks admit exactly one ordered tiling") {
  auto db = parse_fimi_text("0\n0\n1\n1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions, true, 1);
  CpOracle oracle(build_tiling_csp(db, cons), measure_spec(MeasureKind::area, db, cons));
  Cell cell = oracle.solve_bounded({}, kNoCap);
  // cover of {0} = rows 0,1 which lexicographically precedes nothing: it
  // must come first
  CHECK(keys_of(cell, 2, 2) == std::set<std::string>{"0|1"});
}

TEST_CASE("overlap-only data has no tilings") {
  auto db = parse_fimi_text("0 1\n0 1\n0 1\n0 1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions, true, 1);
  CpOracle oracle(build_tiling_csp(db, cons), measure_spec(MeasureKind::area, db, cons));
  Cell cell = oracle.solve_bounded({}, kNoCap);
  CHECK(cell.empty());
}

TEST_CASE("tiling search equals brute force over ordered pairs") {
  Rng rng(616);
  for (int trial = 0; trial < 15; ++trial) {
    const int m = 4 + int(rng.next_below(3));  // 4..6 items
    const int n = 5 + int(rng.next_below(4));  // 5..8 transactions
    auto db = generate_synthetic_db(m, n, 0.5, 777000 + uint64_t(trial));
    const int theta_abs = 1 + int(rng.next_below(2));
    Constraints cons;
    cons.minfreq_fraction = double(theta_abs) / n;
    cons.minfreq_abs = theta_abs;
    cons.closed = true;
    cons.minlen = 1;

    std::vector<XorConstraint> xors;
    for (int i = 0, k = int(rng.next_below(3)); i < k; ++i)
      xors.push_back(draw_random_xor(2 * m, rng));

    auto measure = measure_spec(MeasureKind::area, db, cons);
    CpOracle oracle(build_tiling_csp(db, cons), measure);
    Cell cell = oracle.solve_bounded(xors, kNoCap);
    CHECK(keys_of(cell, 2, m) == brute::tilings(db, cons, xors));
  }
}

TEST_CASE("areas respect the tilt denominator and tilings never overlap") {
  auto db = generate_synthetic_db(6, 8, 0.55, 12);
  auto cons = Constraints::from_fraction(0.25, db.num_transactions, true, 1);
  auto measure = measure_spec(MeasureKind::area, db, cons);
  CpOracle oracle(build_tiling_csp(db, cons), measure);
  Cell cell = oracle.solve_bounded({}, kNoCap);
  const double min_area = 2.0 * double(cons.minfreq_abs) * double(cons.minlen);
  for (const auto& s : cell.solutions) {
    auto patterns = split_solution(s.item_vars, 2, db.num_items);
    CHECK((patterns[0] & patterns[1]).none());
    CHECK(s.quality >= min_area - 1e-9);
  }
}

TEST_CASE("dropping the symmetry break doubles distinct-pair counts") {
  auto db = generate_synthetic_db(5, 7, 0.5, 99);
  auto cons = Constraints::from_fraction(0.3, db.num_transactions, true, 1);
  auto measure = measure_spec(MeasureKind::area, db, cons);

  MiningCsp with_lex = build_tiling_csp(db, cons);
  MiningCsp without_lex = with_lex;
  without_lex.lex_symmetry = false;

  Cell broken = CpOracle(with_lex, measure).solve_bounded({}, kNoCap);
  Cell unbroken = CpOracle(without_lex, measure).solve_bounded({}, kNoCap);

  // no two solutions of the symmetric search are permutations of one another
  std::set<std::string> unordered_keys;
  for (const auto& s : broken.solutions) {
    auto p = split_solution(s.item_vars, 2, db.num_items);
    std::string a = solution_key(s.item_vars, 2, db.num_items);
    const auto bar = a.find('|');
    std::string x = a.substr(0, bar), y = a.substr(bar + 1);
    if (y < x) std::swap(x, y);
    CHECK(unordered_keys.insert(x + "|" + y).second);
  }
  CHECK(unbroken.solutions.size() == 2 * broken.solutions.size());
}

TEST_CASE("a parity constraint can exclude the lone tiling") {
  auto db = parse_fimi_text("0\n0\n1\n1\n");
  auto cons = Constraints::from_fraction(0.5, db.num_transactions, true, 1);
  auto measure = measure_spec(MeasureKind::area, db, cons);
  CpOracle oracle(build_tiling_csp(db, cons), measure);

  Cell base = oracle.solve_bounded({}, kNoCap);
  REQUIRE(base.solutions.size() == 1);
  // build a parity constraint the known solution violates
  XorConstraint c;
  c.coefficients = make_bitset(4, {0});
  c.parity = !base.solutions[0].item_vars.test(0);
  std::vector<XorConstraint> xors{c};
  CHECK(!check_full_assignment(xors, base.solutions[0].item_vars));
  Cell filtered = oracle.solve_bounded(xors, kNoCap);
  CHECK(filtered.empty());
}

TEST_CASE("uncapped searches are never truncated") {
  auto db = generate_synthetic_db(7, 14, 0.5, 4);
  auto cons = Constraints::from_fraction(0.2, db.num_transactions);
  CpOracle oracle(build_itemset_csp(db, cons), measure_spec(MeasureKind::uniform, db, cons));
  CHECK(!oracle.solve_bounded({}, kNoCap).truncated);
}
