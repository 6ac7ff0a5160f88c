#include "flexics/data.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>

#include "flexics/rng.hpp"
#include "flexics/util.hpp"

namespace flexics {

namespace {

// Parses every non-empty line into a token row. Accepts only non-negative
// integers; reports the 1-based line number on failure.
std::vector<std::vector<int>> tokenize_lines(std::istream& in) {
  std::vector<std::vector<int>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<int> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      long v = 0;
      bool ok = true;
      try {
        v = std::stol(tok, &pos);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok || pos != tok.size() || v < 0)
        throw ParseError("invalid token '" + tok + "'", line_no);
      row.push_back(int(v));
    }
    if (!row.empty()) out.push_back(std::move(row));
  }
  return out;
}

TransactionDatabase from_item_rows(const std::vector<std::vector<int>>& items,
                                   std::optional<std::vector<bool>> labels) {
  int max_id = -1;
  for (const auto& row : items)
    for (int v : row) max_id = std::max(max_id, v);
  TransactionDatabase db;
  db.num_items = max_id + 1;
  db.num_transactions = int(items.size());
  db.rows.reserve(items.size());
  for (const auto& row : items) {
    Bitset b(std::size_t(db.num_items));
    for (int v : row) b.set(std::size_t(v));
    db.rows.push_back(std::move(b));
  }
  db.labels = std::move(labels);
  db.original_ids.resize(std::size_t(db.num_items));
  std::iota(db.original_ids.begin(), db.original_ids.end(), 0);
  return db;
}

}  // namespace

TransactionDatabase parse_fimi(std::istream& in) {
  auto rows = tokenize_lines(in);
  if (rows.empty()) throw ParseError("empty input", 0);
  return from_item_rows(rows, std::nullopt);
}

TransactionDatabase parse_cp4im(std::istream& in) {
  auto rows = tokenize_lines(in);
  if (rows.empty()) throw ParseError("empty input", 0);
  std::vector<bool> labels;
  labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    int label = rows[i].back();
    if (label != 0 && label != 1)
      throw ParseError("class label must be 0 or 1, got " + std::to_string(label), int(i + 1));
    labels.push_back(label == 1);
    rows[i].pop_back();
  }
  return from_item_rows(rows, std::move(labels));
}

TransactionDatabase parse_fimi_text(const std::string& text) {
  std::istringstream in(text);
  return parse_fimi(in);
}

TransactionDatabase parse_cp4im_text(const std::string& text) {
  std::istringstream in(text);
  return parse_cp4im(in);
}

std::string serialize_fimi(const TransactionDatabase& db) {
  std::ostringstream out;
  for (const auto& row : db.rows) {
    bool first = true;
    for (int i = row.find_first(); i >= 0; i = row.find_next(i)) {
      if (!first) out << ' ';
      out << db.original_ids[std::size_t(i)];
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

std::string serialize_cp4im(const TransactionDatabase& db) {
  if (!db.has_labels()) throw UsageError("database has no labels");
  std::ostringstream out;
  for (int t = 0; t < db.num_transactions; ++t) {
    const auto& row = db.rows[std::size_t(t)];
    for (int i = row.find_first(); i >= 0; i = row.find_next(i))
      out << db.original_ids[std::size_t(i)] << ' ';
    out << ((*db.labels)[std::size_t(t)] ? 1 : 0) << '\n';
  }
  return out.str();
}

VerticalIndex build_vertical_index(const TransactionDatabase& db) {
  VerticalIndex idx;
  idx.tid_lists.assign(std::size_t(db.num_items), Bitset(std::size_t(db.num_transactions)));
  for (int t = 0; t < db.num_transactions; ++t) {
    const auto& row = db.rows[std::size_t(t)];
    for (int i = row.find_first(); i >= 0; i = row.find_next(i))
      idx.tid_lists[std::size_t(i)].set(std::size_t(t));
  }
  idx.item_order.resize(std::size_t(db.num_items));
  std::iota(idx.item_order.begin(), idx.item_order.end(), 0);
  std::stable_sort(idx.item_order.begin(), idx.item_order.end(), [&](int a, int b) {
    auto fa = idx.tid_lists[std::size_t(a)].count();
    auto fb = idx.tid_lists[std::size_t(b)].count();
    return fa != fb ? fa < fb : a < b;
  });
  return idx;
}

TransactionDatabase generate_synthetic_db(int num_items, int num_transactions,
                                          double density, std::uint64_t seed) {
  if (density < 0.0 || density > 1.0) throw ConfigError("density must be in [0,1]");
  Rng rng(seed);
  TransactionDatabase db;
  db.num_items = num_items;
  db.num_transactions = num_transactions;
  db.rows.reserve(std::size_t(num_transactions));
  for (int t = 0; t < num_transactions; ++t) {
    Bitset row{std::size_t(num_items)};
    for (int i = 0; i < num_items; ++i)
      if (rng.next_unit() < density) row.set(std::size_t(i));
    db.rows.push_back(std::move(row));
  }
  db.original_ids.resize(std::size_t(num_items));
  std::iota(db.original_ids.begin(), db.original_ids.end(), 0);
  return db;
}

DbStats db_stats(const TransactionDatabase& db) {
  DbStats s;
  s.num_items = db.num_items;
  s.num_transactions = db.num_transactions;
  for (const auto& row : db.rows) s.ones_count += std::int64_t(row.count());
  const double cells = double(db.num_items) * double(db.num_transactions);
  s.density = cells > 0 ? double(s.ones_count) / cells : 0.0;
  return s;
}

int frequency(const TransactionDatabase& db, const Bitset& itemset) {
  int n = 0;
  for (const auto& row : db.rows)
    if (itemset.is_subset_of(row)) ++n;
  return n;
}

std::pair<int, int> labeled_frequencies(const TransactionDatabase& db, const Bitset& itemset) {
  if (!db.has_labels()) throw UsageError("database has no labels");
  int pos = 0, neg = 0;
  for (int t = 0; t < db.num_transactions; ++t) {
    if (!itemset.is_subset_of(db.rows[std::size_t(t)])) continue;
    if ((*db.labels)[std::size_t(t)]) ++pos; else ++neg;
  }
  return {pos, neg};
}

}  // namespace flexics
