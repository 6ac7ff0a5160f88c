#include "flexics/check.hpp"

namespace flexics {

namespace {

Bitset cover_of(const TransactionDatabase& db, const Bitset& pattern) {
  Bitset cover(std::size_t(db.num_transactions));
  for (int t = 0; t < db.num_transactions; ++t)
    if (pattern.is_subset_of(db.rows[std::size_t(t)])) cover.set(std::size_t(t));
  return cover;
}

bool is_closed(const TransactionDatabase& db, const Bitset& pattern, const Bitset& cover) {
  // Every item present in all covered transactions must be included.
  for (int i = 0; i < db.num_items; ++i) {
    if (pattern.test(std::size_t(i))) continue;
    bool everywhere = cover.any();
    for (int t = cover.find_first(); t >= 0; t = cover.find_next(t)) {
      if (!db.rows[std::size_t(t)].test(std::size_t(i))) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) return false;
  }
  return true;
}

// true iff a >= b as binary strings over positions 0..N-1.
bool lex_geq(const Bitset& a, const Bitset& b) {
  for (std::size_t t = 0; t < a.size(); ++t) {
    const bool x = a.test(t), y = b.test(t);
    if (x != y) return x;
  }
  return true;
}

}  // namespace

CheckReport check_solution(const TransactionDatabase& db, const Constraints& constraints,
                           bool tiling, std::span<const Bitset> patterns) {
  CheckReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violation = std::move(msg);
    return report;
  };

  if (patterns.empty()) return fail("no pattern");
  if (tiling && patterns.size() != 2) return fail("a tiling needs exactly two patterns");

  std::vector<Bitset> covers;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const Bitset& pattern = patterns[p];
    if (pattern.none()) return fail("empty pattern");
    Bitset cover = cover_of(db, pattern);
    const int freq = int(cover.count());
    if (freq < constraints.minfreq_abs)
      return fail("support " + std::to_string(freq) + " below minfreq " +
                  std::to_string(constraints.minfreq_abs));
    if (constraints.minlen > 0 && int(pattern.count()) < constraints.minlen)
      return fail("length below minlen");
    const bool need_closed = constraints.closed || tiling;
    if (need_closed && !is_closed(db, pattern, cover)) return fail("pattern is not closed");
    covers.push_back(std::move(cover));
  }

  if (tiling) {
    if ((patterns[0] & patterns[1]).any()) return fail("item sets overlap");
    if ((covers[0] & covers[1]).any()) return fail("covers overlap");
    if (!lex_geq(covers[0], covers[1])) return fail("covers violate the lexicographic order");
  }
  return report;
}

}  // namespace flexics
