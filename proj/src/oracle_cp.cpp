#include "flexics/oracle_cp.hpp"

#include <algorithm>
#include <bit>

#include "flexics/util.hpp"

namespace flexics {

namespace {

inline std::size_t words_for(int bits) { return std::size_t(bits + 63) / 64; }

inline void set_bit(std::uint64_t* w, int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline void clear_bit(std::uint64_t* w, int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

inline bool any_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] & b[k]) return true;
  return false;
}

inline bool subset_of(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] & ~b[k]) return false;
  return true;
}

inline int popcount_words(const std::uint64_t* a, std::size_t n) {
  int c = 0;
  for (std::size_t k = 0; k < n; ++k) c += std::popcount(a[k]);
  return c;
}

// Iterates set bits of (a & mask_op(b)) up to n words.
template <typename Fn>
inline bool for_each_bit(const std::uint64_t* a, std::size_t n, Fn&& fn) {
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t w = a[k];
    while (w) {
      const int bit = int(k * 64) + std::countr_zero(w);
      if (!fn(bit)) return false;
      w &= w - 1;
    }
  }
  return true;
}

}  // namespace

MiningCsp build_itemset_csp(const TransactionDatabase& db, const Constraints& constraints) {
  if (constraints.minfreq_abs < 1 || constraints.minfreq_abs > db.num_transactions)
    throw ConfigError("minfreq out of range for this dataset");
  if (constraints.minlen > db.num_items)
    throw ConfigError("minlen exceeds the number of items");
  MiningCsp csp;
  csp.db = &db;
  csp.k = 1;
  csp.constraints = constraints;
  return csp;
}

MiningCsp build_tiling_csp(const TransactionDatabase& db, const Constraints& constraints) {
  if (constraints.minlen < 1) throw ConfigError("tiling task needs a minlen constraint");
  MiningCsp csp = build_itemset_csp(db, constraints);
  csp.k = 2;
  csp.constraints.closed = true;
  csp.no_overlap = true;
  csp.lex_symmetry = true;
  return csp;
}

CpOracle::CpOracle(const MiningCsp& csp, const MeasureSpec& measure)
    : csp_(csp), measure_(measure) {
  const auto& db = *csp_.db;
  iw_ = words_for(db.num_items);
  tw_ = words_for(db.num_transactions);
  outside_.assign(std::size_t(db.num_transactions) * iw_, 0);
  for (int t = 0; t < db.num_transactions; ++t)
    for (int i = 0; i < db.num_items; ++i)
      if (!db.rows[std::size_t(t)].test(std::size_t(i)))
        set_bit(&outside_[std::size_t(t) * iw_], i);
  miss_.assign(std::size_t(db.num_items) * tw_, 0);
  for (int i = 0; i < db.num_items; ++i)
    for (int t = 0; t < db.num_transactions; ++t)
      if (!db.rows[std::size_t(t)].test(std::size_t(i)))
        set_bit(&miss_[std::size_t(i) * tw_], t);
}

std::uint64_t* CpOracle::items_one(SearchState& s, int c) const {
  return &s.masks[std::size_t(c) * 2 * (iw_ + tw_)];
}
std::uint64_t* CpOracle::items_zero(SearchState& s, int c) const {
  return items_one(s, c) + iw_;
}
std::uint64_t* CpOracle::trans_one(SearchState& s, int c) const {
  return items_one(s, c) + 2 * iw_;
}
std::uint64_t* CpOracle::trans_zero(SearchState& s, int c) const {
  return items_one(s, c) + 2 * iw_ + tw_;
}

bool CpOracle::set_var(SearchState& s, int var, bool value, bool& changed) const {
  std::int8_t& d = s.dom[std::size_t(var)];
  if (d >= 0) {
    if ((d != 0) != value) {
      s.conflict = true;
      return false;
    }
    return true;
  }
  d = value ? 1 : 0;
  s.trail.push_back(var);
  changed = true;
  const int n_item_vars = csp_.num_item_vars();
  if (var < n_item_vars) {
    const int c = var / csp_.num_items();
    const int i = var % csp_.num_items();
    set_bit(value ? items_one(s, c) : items_zero(s, c), i);
  } else {
    const int rel = var - n_item_vars;
    const int c = rel / csp_.num_transactions();
    const int t = rel % csp_.num_transactions();
    set_bit(value ? trans_one(s, c) : trans_zero(s, c), t);
  }
  return true;
}

void CpOracle::undo_to(SearchState& s, std::size_t mark) const {
  const int n_item_vars = csp_.num_item_vars();
  while (s.trail.size() > mark) {
    const int var = s.trail.back();
    s.trail.pop_back();
    const bool value = s.dom[std::size_t(var)] == 1;
    s.dom[std::size_t(var)] = -1;
    if (var < n_item_vars) {
      const int c = var / csp_.num_items();
      const int i = var % csp_.num_items();
      clear_bit(value ? items_one(s, c) : items_zero(s, c), i);
    } else {
      const int rel = var - n_item_vars;
      const int c = rel / csp_.num_transactions();
      const int t = rel % csp_.num_transactions();
      clear_bit(value ? trans_one(s, c) : trans_zero(s, c), t);
    }
  }
  s.conflict = false;
}

FixpointResult CpOracle::propagate_to_fixpoint(SearchState& s) const {
  const auto& db = *csp_.db;
  const int M = db.num_items;
  const int N = db.num_transactions;
  const int K = csp_.k;
  const int theta = csp_.constraints.minfreq_abs;
  const int min_items = std::max(1, csp_.constraints.minlen);

  if (s.conflict) return FixpointResult::conflict;

  bool changed = true;
  while (changed && !s.conflict) {
    changed = false;

    for (int c = 0; c < K && !s.conflict; ++c) {
      const std::uint64_t* io = items_one(s, c);
      const std::uint64_t* iz = items_zero(s, c);

      // coverage: T_t = 1 iff no included item lies outside transaction t
      for (int t = 0; t < N && !s.conflict; ++t) {
        const std::uint64_t* out = &outside_[std::size_t(t) * iw_];
        const int tv = csp_.trans_var(c, t);
        const std::int8_t td = s.dom[std::size_t(tv)];
        if (td < 0 || td == 1) {
          if (any_and(out, io, iw_)) {
            if (!set_var(s, tv, false, changed)) break;
            continue;
          }
          if (td < 0 && subset_of(out, iz, iw_)) {
            if (!set_var(s, tv, true, changed)) break;
          }
        }
        if (s.dom[std::size_t(tv)] == 1) {
          const bool ok = for_each_bit(out, iw_, [&](int i) {
            return set_var(s, csp_.item_var(c, i), false, changed);
          });
          if (!ok) break;
        } else if (s.dom[std::size_t(tv)] == 0) {
          if (any_and(out, io, iw_)) continue;  // already excluded
          int cand = -1, n_cand = 0;
          for_each_bit(out, iw_, [&](int i) {
            if (!((iz[i >> 6] >> (i & 63)) & 1u)) {
              cand = i;
              ++n_cand;
            }
            return n_cand < 2;
          });
          if (n_cand == 0) {
            s.conflict = true;
          } else if (n_cand == 1) {
            if (!set_var(s, csp_.item_var(c, cand), true, changed)) break;
          }
        }
      }
      if (s.conflict) break;

      const std::uint64_t* to = trans_one(s, c);
      const std::uint64_t* tz = trans_zero(s, c);

      // minfreq: at least theta covered transactions
      {
        const int ones = popcount_words(to, tw_);
        const int zeros = popcount_words(tz, tw_);
        const int free = N - ones - zeros;
        if (ones + free < theta) {
          s.conflict = true;
          break;
        }
        if (ones < theta && ones + free == theta) {
          for (int t = 0; t < N; ++t) {
            const int tv = csp_.trans_var(c, t);
            if (s.dom[std::size_t(tv)] < 0 && !set_var(s, tv, true, changed)) break;
          }
        }
      }
      if (s.conflict) break;

      // minlen / nonempty: at least min_items included items
      {
        const int ones = popcount_words(io, iw_);
        const int zeros = popcount_words(iz, iw_);
        const int free = M - ones - zeros;
        if (ones + free < min_items) {
          s.conflict = true;
          break;
        }
        if (ones < min_items && ones + free == min_items) {
          for (int i = 0; i < M; ++i) {
            const int iv = csp_.item_var(c, i);
            if (s.dom[std::size_t(iv)] < 0 && !set_var(s, iv, true, changed)) break;
          }
        }
      }
      if (s.conflict) break;

      // closed: item included iff every covered transaction contains it
      if (csp_.constraints.closed) {
        for (int i = 0; i < M && !s.conflict; ++i) {
          const std::uint64_t* miss = &miss_[std::size_t(i) * tw_];
          const int iv = csp_.item_var(c, i);
          const std::int8_t id = s.dom[std::size_t(iv)];
          if (any_and(miss, to, tw_)) {
            // a covered transaction misses item i
            if (id == 1) {
              s.conflict = true;
              break;
            }
            if (id < 0 && !set_var(s, iv, false, changed)) break;
            continue;
          }
          if (subset_of(miss, tz, tw_)) {
            if (!set_var(s, iv, true, changed)) break;
            continue;
          }
          if (id == 1) {
            const bool ok = for_each_bit(miss, tw_, [&](int t) {
              return set_var(s, csp_.trans_var(c, t), false, changed);
            });
            if (!ok) break;
          } else if (id == 0) {
            int cand = -1, n_cand = 0;
            for_each_bit(miss, tw_, [&](int t) {
              if (!((tz[t >> 6] >> (t & 63)) & 1u)) {
                cand = t;
                ++n_cand;
              }
              return n_cand < 2;
            });
            if (n_cand == 0) {
              s.conflict = true;
            } else if (n_cand == 1) {
              if (!set_var(s, csp_.trans_var(c, cand), true, changed)) break;
            }
          }
        }
      }
    }
    if (s.conflict) break;

    if (csp_.no_overlap && K == 2) {
      for (int c = 0; c < 2 && !s.conflict; ++c) {
        const bool ok_items = for_each_bit(items_one(s, c), iw_, [&](int i) {
          return set_var(s, csp_.item_var(1 - c, i), false, changed);
        });
        if (!ok_items) break;
        const bool ok_trans = for_each_bit(trans_one(s, c), tw_, [&](int t) {
          return set_var(s, csp_.trans_var(1 - c, t), false, changed);
        });
        if (!ok_trans) break;
      }
    }
    if (s.conflict) break;

    // lexicographic symmetry break: cover of copy 0 >= cover of copy 1,
    // covers read as binary strings over t = 0..N-1
    if (csp_.lex_symmetry && K == 2) {
      for (int t = 0; t < N; ++t) {
        const std::int8_t a = s.dom[std::size_t(csp_.trans_var(0, t))];
        const std::int8_t b = s.dom[std::size_t(csp_.trans_var(1, t))];
        if (a >= 0 && b >= 0) {
          if (a > b) break;  // strictly greater: satisfied
          if (a < b) {
            s.conflict = true;
            break;
          }
          continue;  // equal so far
        }
        if (a == 0 && b < 0) {
          if (!set_var(s, csp_.trans_var(1, t), false, changed)) break;
          continue;
        }
        if (a < 0 && b == 1) {
          if (!set_var(s, csp_.trans_var(0, t), true, changed)) break;
          continue;
        }
        break;  // undetermined prefix: nothing to force yet
      }
    }
    if (s.conflict) break;

    // parity constraints over the item variables
    if (s.xors.num_rows() > 0) {
      std::vector<std::pair<int, bool>> updates;
      for (int v = 0; v < csp_.num_item_vars(); ++v)
        if (s.dom[std::size_t(v)] >= 0 && s.xors.is_free(v))
          updates.emplace_back(v, s.dom[std::size_t(v)] == 1);
      if (!updates.empty()) {
        PropagationOutcome out = s.xors.assign_and_propagate(updates);
        if (out.conflict) {
          s.conflict = true;
          break;
        }
        for (const auto& [var, value] : out.implied)
          if (!set_var(s, var, value, changed)) break;
      }
    } else if (s.xors.conflicted()) {
      s.conflict = true;
      break;
    }
  }

  return s.conflict ? FixpointResult::conflict : FixpointResult::consistent;
}

FixpointResult CpOracle::assign(SearchState& s, int var, bool value) const {
  bool changed = false;
  if (!set_var(s, var, value, changed)) return FixpointResult::conflict;
  return propagate_to_fixpoint(s);
}

SearchState CpOracle::make_root_state(std::span<const XorConstraint> xors) const {
  SearchState s{std::vector<std::int8_t>(std::size_t(csp_.num_vars()), -1),
                std::vector<std::uint64_t>(std::size_t(csp_.k) * 2 * (iw_ + tw_), 0),
                {},
                Gf2System(csp_.num_item_vars(), xors),
                false};
  if (s.xors.conflicted()) {
    s.conflict = true;
    return s;
  }
  bool changed = false;
  for (const auto& [var, value] : s.xors.initial_implied())
    if (!set_var(s, var, value, changed)) return s;
  return s;
}

struct CpOracle::Enumeration {
  double cap;
  Cell cell;
  KahanSum weight_sum;
  bool stopped = false;
};

void CpOracle::emit(const SearchState& s, Enumeration& run) const {
  Bitset item_vars{std::size_t(csp_.num_item_vars())};
  for (int v = 0; v < csp_.num_item_vars(); ++v)
    if (s.dom[std::size_t(v)] == 1) item_vars.set(std::size_t(v));

  Solution sol;
  if (csp_.k == 1) {
    sol.quality = evaluate_quality(measure_, *csp_.db, item_vars);
  } else {
    auto patterns = split_solution(item_vars, csp_.k, csp_.num_items());
    sol.quality = evaluate_quality(measure_, *csp_.db, patterns);
  }
  sol.weight = weight(measure_, sol.quality);
  sol.item_vars = std::move(item_vars);

  run.weight_sum.add(sol.weight);
  run.cell.min_weight = std::min(run.cell.min_weight, sol.weight);
  run.cell.solutions.push_back(std::move(sol));
  run.cell.total_weight = run.weight_sum.value();
  if (run.cell.total_weight > run.cap) {
    run.cell.truncated = true;
    run.stopped = true;
  }
}

void CpOracle::dfs(SearchState& s, int from_var, bool track_xors, Enumeration& run) const {
  if (run.stopped) return;

  int branch_var = -1;
  for (int v = from_var; v < csp_.num_item_vars(); ++v) {
    if (s.dom[std::size_t(v)] < 0) {
      branch_var = v;
      break;
    }
  }
  if (branch_var < 0) {
    emit(s, run);
    return;
  }

  for (bool value : {true, false}) {
    if (run.stopped) return;
    const std::size_t mark = s.trail.size();
    Gf2System saved = track_xors ? s.xors : Gf2System(0, {});
    bool changed = false;
    if (set_var(s, branch_var, value, changed) &&
        propagate_to_fixpoint(s) == FixpointResult::consistent) {
      dfs(s, branch_var + 1, track_xors, run);
    }
    undo_to(s, mark);
    if (track_xors) s.xors = std::move(saved);
  }
}

Cell CpOracle::solve_bounded(std::span<const XorConstraint> xors, double weight_cap) const {
  Enumeration run{weight_cap, {}, {}, false};
  SearchState root = make_root_state(xors);
  if (!root.conflict && propagate_to_fixpoint(root) == FixpointResult::consistent) {
    const bool track_xors = root.xors.num_rows() > 0;
    dfs(root, 0, track_xors, run);
  }
  return std::move(run.cell);
}

}  // namespace flexics
