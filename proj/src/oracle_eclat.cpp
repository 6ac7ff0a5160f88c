#include "flexics/oracle_eclat.hpp"

#include <algorithm>

#include "flexics/util.hpp"

namespace flexics {

namespace {

struct Candidate {
  int item;
  Bitset tids;  // conditional on the current prefix
};

// State of one bounded enumeration. Mutable scratch lives here so the
// oracle object itself stays immutable and shareable.
struct Enumeration {
  const TransactionDatabase& db;
  int theta;
  const MeasureSpec& measure;
  std::span<const XorConstraint> xors;
  double cap;

  Cell cell;
  KahanSum weight_sum;
  bool stopped = false;

  // Classifies updates against values already recorded in the system.
  // Returns false when an update contradicts a recorded assignment, which
  // kills the branch.
  static bool filter_updates(const Gf2System& m, std::vector<std::pair<int, bool>>& updates) {
    std::size_t keep = 0;
    for (const auto& [var, value] : updates) {
      int cur = m.assignment(var);
      if (cur < 0) {
        updates[keep++] = {var, value};
      } else if ((cur != 0) != value) {
        return false;
      }
    }
    updates.resize(keep);
    return true;
  }

  void emit(const Bitset& prefix) {
    if (!check_full_assignment(xors, prefix)) return;
    Solution s;
    s.item_vars = prefix;
    s.quality = evaluate_quality(measure, db, prefix);
    s.weight = weight(measure, s.quality);
    weight_sum.add(s.weight);
    cell.min_weight = std::min(cell.min_weight, s.weight);
    cell.solutions.push_back(std::move(s));
    cell.total_weight = weight_sum.value();
    if (cell.total_weight > cap) {
      cell.truncated = true;
      stopped = true;
    }
  }

  // Processes the equivalence class of itemsets starting with `prefix`:
  // emits the prefix itself, then branches on each candidate suffix.
  void eq_class(const Bitset& prefix, const std::vector<Candidate>& cands,
                const Gf2System& system) {
    if (!prefix.none()) {
      emit(prefix);
      if (stopped) return;
    }

    for (std::size_t idx = 0; idx < cands.size() && !stopped; ++idx) {
      const Candidate& s = cands[idx];

      Bitset next_prefix = prefix;
      next_prefix.set(std::size_t(s.item));
      Bitset next_tids = s.tids;

      std::vector<Candidate> suffixes;
      std::vector<std::pair<int, bool>> updates;
      updates.emplace_back(s.item, true);
      for (std::size_t j = 0; j < idx; ++j) updates.emplace_back(cands[j].item, false);
      for (std::size_t j = idx + 1; j < cands.size(); ++j) {
        Bitset t = cands[j].tids & next_tids;
        if (int(t.count()) >= theta) {
          suffixes.push_back({cands[j].item, std::move(t)});
        } else {
          updates.emplace_back(cands[j].item, false);
        }
      }

      Gf2System branch = system;
      bool dead = false;
      while (!updates.empty()) {
        if (!filter_updates(branch, updates)) { dead = true; break; }
        if (updates.empty()) break;
        PropagationOutcome out = branch.assign_and_propagate(updates);
        updates.clear();
        if (out.conflict) { dead = true; break; }

        // Forced items join the prefix; their TIDs narrow the cover.
        std::vector<const Candidate*> ext;
        for (const auto& [var, value] : out.implied) {
          auto it = std::find_if(suffixes.begin(), suffixes.end(),
                                 [v = var](const Candidate& c) { return c.item == v; });
          if (it == suffixes.end()) {
            if (value) { dead = true; break; }  // forced item unavailable here
            continue;
          }
          if (value) ext.push_back(&*it);
        }
        if (dead) break;
        if (ext.empty()) break;

        for (const Candidate* c : ext) {
          next_prefix.set(std::size_t(c->item));
          next_tids &= c->tids;
        }
        if (int(next_tids.count()) < theta) { dead = true; break; }

        // Drop extended items and re-check the support of what remains;
        // new drops feed the next propagation round.
        std::vector<Candidate> remaining;
        for (auto& c : suffixes) {
          if (next_prefix.test(std::size_t(c.item))) continue;
          if (branch.assignment(c.item) == 0) continue;
          c.tids &= next_tids;
          if (int(c.tids.count()) >= theta) {
            remaining.push_back(std::move(c));
          } else {
            updates.emplace_back(c.item, false);
          }
        }
        suffixes = std::move(remaining);
      }
      if (dead) continue;

      // Propagation may have zeroed candidates without a support drop.
      std::erase_if(suffixes, [&](const Candidate& c) { return branch.assignment(c.item) == 0; });

      eq_class(next_prefix, suffixes, branch);
    }
  }
};

}  // namespace

EclatOracle::EclatOracle(const TransactionDatabase& db, const VerticalIndex& index, int theta_abs,
                         const MeasureSpec& measure)
    : db_(&db), index_(&index), theta_abs_(theta_abs), measure_(measure) {
  if (theta_abs < 1) throw UsageError("theta_abs must be >= 1");
  if (measure.kind == MeasureKind::area)
    throw UsageError("this oracle enumerates single itemsets");
}

Cell EclatOracle::solve_bounded(std::span<const XorConstraint> xors, double weight_cap) const {
  Enumeration run{*db_, theta_abs_, measure_, xors, weight_cap, {}, {}, false};

  Gf2System root(db_->num_items, xors);
  if (root.conflicted()) return std::move(run.cell);

  // Globally infrequent items are zero in every solution.
  std::vector<Candidate> frequent;
  std::vector<std::pair<int, bool>> infrequent;
  for (int item : index_->item_order) {
    const Bitset& tids = index_->tid_lists[std::size_t(item)];
    if (int(tids.count()) >= theta_abs_) {
      frequent.push_back({item, tids});
    } else {
      infrequent.emplace_back(item, false);
    }
  }
  if (!Enumeration::filter_updates(root, infrequent)) return std::move(run.cell);
  if (!infrequent.empty()) {
    if (root.assign_and_propagate(infrequent).conflict) return std::move(run.cell);
  }

  Bitset empty_prefix{std::size_t(db_->num_items)};
  run.eq_class(empty_prefix, frequent, root);
  return std::move(run.cell);
}

}  // namespace flexics
