#pragma once

// Definition-level reference enumeration used to validate the search
// oracles. Everything here is computed straight from the constraint
// definitions by exhaustive scans; none of the indexed or propagated
// machinery under test is involved.

#include <set>
#include <string>
#include <vector>

#include "flexics/bitset.hpp"
#include "flexics/constraints.hpp"
#include "flexics/data.hpp"
#include "flexics/gf2.hpp"

namespace flexics::brute {

inline Bitset cover_of(const TransactionDatabase& db, const Bitset& pattern) {
  Bitset cover{std::size_t(db.num_transactions)};
  for (int t = 0; t < db.num_transactions; ++t) {
    bool inside = true;
    for (int i = pattern.find_first(); i >= 0; i = pattern.find_next(i))
      if (!db.rows[std::size_t(t)].test(std::size_t(i))) { inside = false; break; }
    if (inside) cover.set(std::size_t(t));
  }
  return cover;
}

inline bool closed_in(const TransactionDatabase& db, const Bitset& pattern, const Bitset& cover) {
  for (int i = 0; i < db.num_items; ++i) {
    if (pattern.test(std::size_t(i))) continue;
    bool in_all = true;
    for (int t = cover.find_first(); t >= 0; t = cover.find_next(t))
      if (!db.rows[std::size_t(t)].test(std::size_t(i))) { in_all = false; break; }
    if (in_all && cover.any()) return false;
  }
  return true;
}

inline Bitset itemset_from_mask(unsigned long mask, int num_items) {
  Bitset p{std::size_t(num_items)};
  for (int i = 0; i < num_items; ++i)
    if ((mask >> i) & 1u) p.set(std::size_t(i));
  return p;
}

// All non-empty itemsets satisfying minfreq (+closed) (+minlen) and every
// parity constraint. Keys are comma-joined sorted item ids.
inline std::set<std::string> itemsets(const TransactionDatabase& db, const Constraints& cons,
                                      std::span<const XorConstraint> xors) {
  std::set<std::string> out;
  const int m = db.num_items;
  for (unsigned long mask = 1; mask < (1ul << m); ++mask) {
    Bitset p = itemset_from_mask(mask, m);
    Bitset cover = cover_of(db, p);
    if (int(cover.count()) < cons.minfreq_abs) continue;
    if (cons.minlen > 0 && int(p.count()) < cons.minlen) continue;
    if (cons.closed && !closed_in(db, p, cover)) continue;
    bool ok = true;
    for (const auto& c : xors)
      if (c.coefficients.parity_and(p) != c.parity) { ok = false; break; }
    if (!ok) continue;
    std::string key;
    for (int i = p.find_first(); i >= 0; i = p.find_next(i)) {
      if (!key.empty()) key += ',';
      key += std::to_string(i);
    }
    out.insert(key);
  }
  return out;
}

inline bool lex_geq(const Bitset& a, const Bitset& b) {
  for (std::size_t t = 0; t < a.size(); ++t) {
    const bool x = a.test(t), y = b.test(t);
    if (x != y) return x;
  }
  return true;
}

// All ordered pairs of closed frequent long-enough itemsets with disjoint
// items, disjoint covers, and first cover lexicographically >= second.
// Parity constraints range over the concatenated 2M item indicator.
inline std::set<std::string> tilings(const TransactionDatabase& db, const Constraints& cons,
                                     std::span<const XorConstraint> xors) {
  const int m = db.num_items;
  struct Entry { Bitset pattern, cover; std::string key; };
  std::vector<Entry> parts;
  for (unsigned long mask = 1; mask < (1ul << m); ++mask) {
    Bitset p = itemset_from_mask(mask, m);
    Bitset cover = cover_of(db, p);
    if (int(cover.count()) < cons.minfreq_abs) continue;
    if (int(p.count()) < std::max(1, cons.minlen)) continue;
    if (!closed_in(db, p, cover)) continue;
    std::string key;
    for (int i = p.find_first(); i >= 0; i = p.find_next(i)) {
      if (!key.empty()) key += ',';
      key += std::to_string(i);
    }
    parts.push_back({std::move(p), std::move(cover), std::move(key)});
  }
  std::set<std::string> out;
  for (const auto& a : parts) {
    for (const auto& b : parts) {
      if ((a.pattern & b.pattern).any()) continue;
      if ((a.cover & b.cover).any()) continue;
      if (!lex_geq(a.cover, b.cover)) continue;
      Bitset composite(std::size_t(2 * m));
      for (int i = a.pattern.find_first(); i >= 0; i = a.pattern.find_next(i))
        composite.set(std::size_t(i));
      for (int i = b.pattern.find_first(); i >= 0; i = b.pattern.find_next(i))
        composite.set(std::size_t(m + i));
      bool ok = true;
      for (const auto& c : xors)
        if (c.coefficients.parity_and(composite) != c.parity) { ok = false; break; }
      if (!ok) continue;
      out.insert(a.key + "|" + b.key);
    }
  }
  return out;
}

}  // namespace flexics::brute
