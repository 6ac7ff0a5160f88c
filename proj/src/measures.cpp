#include "flexics/measures.hpp"

#include <algorithm>

namespace flexics {

MeasureKind parse_measure_kind(const std::string& token) {
  if (token == "uniform") return MeasureKind::uniform;
  if (token == "freq") return MeasureKind::freq;
  if (token == "purity") return MeasureKind::purity;
  if (token == "area") return MeasureKind::area;
  throw ConfigError("unknown measure '" + token + "'");
}

std::string measure_kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::uniform: return "uniform";
    case MeasureKind::freq: return "freq";
    case MeasureKind::purity: return "purity";
    case MeasureKind::area: return "area";
  }
  return "?";
}

MeasureSpec measure_spec(MeasureKind kind, const TransactionDatabase& db,
                         const Constraints& constraints) {
  MeasureSpec spec;
  spec.kind = kind;
  switch (kind) {
    case MeasureKind::uniform:
      spec.scaling_constant = 1.0;
      spec.tilt_bound = 1.0;
      break;
    case MeasureKind::freq:
      if (constraints.minfreq_fraction <= 0.0)
        throw ConfigError("freq measure needs minfreq > 0 (tilt is unbounded otherwise)");
      spec.scaling_constant = double(db.num_transactions);
      spec.tilt_bound = 1.0 / constraints.minfreq_fraction;
      break;
    case MeasureKind::purity:
      if (!db.has_labels()) throw ConfigError("purity requires a labeled dataset");
      spec.scaling_constant = 1.0;
      spec.tilt_bound = 2.0;
      break;
    case MeasureKind::area: {
      if (constraints.minfreq_fraction <= 0.0)
        throw ConfigError("area measure needs minfreq > 0");
      if (constraints.minlen < 1)
        throw ConfigError("area measure needs a minlen constraint");
      const double total_ones = double(db_stats(db).ones_count);
      spec.scaling_constant = total_ones;
      const double min_area =
          2.0 * (double(db.num_transactions) * constraints.minfreq_fraction) *
          double(constraints.minlen);
      spec.tilt_bound = total_ones / min_area;
      break;
    }
  }
  spec.tilt_bound = std::max(spec.tilt_bound, 1.0);
  return spec;
}

double evaluate_quality(const MeasureSpec& spec, const TransactionDatabase& db,
                        const Bitset& itemset) {
  switch (spec.kind) {
    case MeasureKind::uniform:
      return spec.quality_scale;
    case MeasureKind::freq:
      return spec.quality_scale * double(frequency(db, itemset));
    case MeasureKind::purity: {
      auto [pos, neg] = labeled_frequencies(db, itemset);
      const int total = pos + neg;
      if (total == 0) throw UsageError("purity undefined for zero-support itemset");
      return spec.quality_scale * double(std::max(pos, neg)) / double(total);
    }
    case MeasureKind::area:
      throw UsageError("area applies to pattern sets, not single itemsets");
  }
  return 0.0;
}

double evaluate_quality(const MeasureSpec& spec, const TransactionDatabase& db,
                        std::span<const Bitset> patterns) {
  switch (spec.kind) {
    case MeasureKind::uniform:
      return spec.quality_scale;
    case MeasureKind::area: {
      double area = 0.0;
      for (const auto& p : patterns)
        area += double(frequency(db, p)) * double(p.count());
      return spec.quality_scale * area;
    }
    default:
      throw UsageError("measure does not apply to pattern sets");
  }
}

double weight(const MeasureSpec& spec, double quality) {
  if (quality <= 0.0) throw UsageError("quality must be positive");
  if (quality > spec.scaling_constant * (1.0 + 1e-12))
    throw UsageError("quality exceeds the scaling constant");
  return std::min(1.0, quality / spec.scaling_constant);
}

}  // namespace flexics
