#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flexics/bitset.hpp"

namespace flexics {

// Immutable binary transaction data, optionally class-labeled. All
// frequencies are computed against this structure.
struct TransactionDatabase {
  int num_items = 0;                        // M
  int num_transactions = 0;                 // N
  std::vector<Bitset> rows;                 // per transaction, M bits
  std::optional<std::vector<bool>> labels;  // per transaction: true = '+'
  std::vector<int> original_ids;            // internal item id -> input id

  bool has_labels() const { return labels.has_value(); }
};

// Transposed view: one transaction-index bitset per item, plus the
// frequency-ascending item order used by depth-first enumeration.
struct VerticalIndex {
  std::vector<Bitset> tid_lists;  // per item, N bits
  std::vector<int> item_order;    // frequency ascending, ties by item id
};

struct DbStats {
  int num_items = 0;
  int num_transactions = 0;
  double density = 0.0;
  std::int64_t ones_count = 0;
};

// One transaction per non-empty line, whitespace-separated non-negative
// integer item ids. M = 1 + max item id.
TransactionDatabase parse_fimi(std::istream& in);
TransactionDatabase parse_fimi_text(const std::string& text);

// As FIMI, but the last token of each line is the class label (0 or 1).
TransactionDatabase parse_cp4im(std::istream& in);
TransactionDatabase parse_cp4im_text(const std::string& text);

// Normalized text form (sorted item ids per line; label appended last).
std::string serialize_fimi(const TransactionDatabase& db);
std::string serialize_cp4im(const TransactionDatabase& db);

VerticalIndex build_vertical_index(const TransactionDatabase& db);

// Each bit set independently with the given probability; deterministic
// per seed.
TransactionDatabase generate_synthetic_db(int num_items, int num_transactions,
                                          double density, std::uint64_t seed);

DbStats db_stats(const TransactionDatabase& db);

// Support of an itemset: number of rows it is a subset of.
int frequency(const TransactionDatabase& db, const Bitset& itemset);

// Supports within the positive / negative labeled rows.
std::pair<int, int> labeled_frequencies(const TransactionDatabase& db, const Bitset& itemset);

}  // namespace flexics
