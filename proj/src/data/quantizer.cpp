#include "rulemine/data/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rulemine/data/csv.hpp"
#include "rulemine/error.hpp"

namespace rulemine::data {

std::size_t FeatureBins::level_count() const {
  return kind == FeatureKind::Categorical ? arity : edges.size() - 1;
}

int FeatureBins::level_of(double value) const {
  if (kind == FeatureKind::Categorical) return static_cast<int>(value);
  // Interior edges e_1..e_{k-1}; the level is the number of them <= value.
  auto first = edges.begin() + 1;
  auto last = edges.end() - 1;
  if (first >= last) return 0;
  return static_cast<int>(std::upper_bound(first, last, value) - first);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sequence");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BinMap BinMap::fit(const Dataset& train, std::size_t n_bins) {
  if (n_bins == 0) throw ConfigError("bin count must be positive");
  std::vector<FeatureBins> out;
  out.reserve(train.n_features());
  for (std::size_t f = 0; f < train.n_features(); ++f) {
    const auto& spec = train.schema().feature(f);
    FeatureBins bins;
    bins.kind = spec.kind;
    if (spec.kind == FeatureKind::Categorical) {
      bins.arity = spec.categories.size();
      out.push_back(std::move(bins));
      continue;
    }
    std::vector<double> sorted(train.column(f).begin(), train.column(f).end());
    if (std::any_of(sorted.begin(), sorted.end(), is_missing))
      throw DataError("quantizer: feature '" + spec.name + "' has missing values");
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i <= n_bins; ++i) {
      double e = i == n_bins ? sorted.back()
                             : quantile_sorted(sorted, static_cast<double>(i) / static_cast<double>(n_bins));
      if (bins.edges.empty() || e > bins.edges.back()) bins.edges.push_back(e);
    }
    // A constant column yields one degenerate bin [c, c].
    if (bins.edges.size() == 1) bins.edges.push_back(bins.edges.front());
    out.push_back(std::move(bins));
  }
  return BinMap(std::move(out));
}

BinnedDataset BinMap::apply(const Dataset& ds) const {
  if (ds.n_features() != features_.size()) throw ConfigError("bin map fitted on a different schema");
  std::vector<std::vector<int>> levels(ds.n_features());
  std::vector<std::size_t> counts(ds.n_features());
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    const auto& bins = features_[f];
    counts[f] = bins.level_count();
    levels[f].reserve(ds.n_samples());
    for (double v : ds.column(f)) {
      if (is_missing(v))
        throw DataError("quantizer: missing value in '" + ds.schema().feature(f).name + "'");
      levels[f].push_back(bins.level_of(v));
    }
  }
  return BinnedDataset(ds.schema(), std::move(counts), std::move(levels),
                       std::vector<int>(ds.labels().begin(), ds.labels().end()));
}

BinnedDataset::BinnedDataset(FeatureSchema schema, std::vector<std::size_t> level_counts,
                             std::vector<std::vector<int>> levels, std::vector<int> labels)
    : schema_(std::move(schema)),
      level_counts_(std::move(level_counts)),
      levels_(std::move(levels)),
      labels_(std::move(labels)) {
  if (levels_.size() != schema_.n_features() || level_counts_.size() != levels_.size())
    throw DataError("binned dataset does not match schema");
  for (std::size_t f = 0; f < levels_.size(); ++f) {
    if (levels_[f].size() != labels_.size()) throw DataError("binned column has wrong length");
    if (level_counts_[f] == 0) throw DataError("binned feature with no level");
    for (int v : levels_[f])
      if (v < 0 || static_cast<std::size_t>(v) >= level_counts_[f])
        throw DataError("level out of range in '" + schema_.feature(f).name + "'");
  }
  for (int y : labels_)
    if (y < 0 || static_cast<std::size_t>(y) >= schema_.n_classes())
      throw DataError("class index out of range");
}

std::vector<std::size_t> BinnedDataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes(), 0);
  for (int y : labels_) ++counts[y];
  return counts;
}

BinnedDataset BinnedDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::vector<int>> levels(levels_.size());
  for (std::size_t f = 0; f < levels_.size(); ++f) {
    levels[f].reserve(indices.size());
    for (auto i : indices) levels[f].push_back(levels_[f].at(i));
  }
  std::vector<int> labels;
  for (auto i : indices) labels.push_back(labels_.at(i));
  return BinnedDataset(schema_, level_counts_, std::move(levels), std::move(labels));
}

BinnedDataset BinnedDataset::with_labels(std::vector<int> labels) const {
  return BinnedDataset(schema_, level_counts_, levels_, std::move(labels));
}

void write_binned_csv(const BinnedDataset& ds, std::ostream& out) {
  const auto& schema = ds.schema();
  for (const auto& f : schema.features()) out << f.name << ',';
  out << schema.target().name << '\n';
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
      if (ds.kind(f) == FeatureKind::Categorical)
        out << schema.feature(f).categories[ds.level(i, f)];
      else
        out << ds.level(i, f) + 1;
      out << ',';
    }
    out << schema.target().labels[ds.label(i)] << '\n';
  }
}

}  // namespace rulemine::data
