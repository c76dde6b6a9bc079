#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rulemine/data/dataset.hpp"

namespace rulemine::data {

/// Quantization of one feature. Continuous features keep the sorted edges
/// e_0 < e_1 < ... < e_k; bin b covers [e_b, e_{b+1}) and the last bin is
/// closed. Categorical features map each category to its own level.
struct FeatureBins {
  FeatureKind kind = FeatureKind::Continuous;
  std::vector<double> edges;
  std::size_t arity = 0;

  std::size_t level_count() const;
  /// 0-based level; continuous values outside the fitted range clamp.
  int level_of(double value) const;
  double lower(int level) const { return edges.at(level); }
  double upper(int level) const { return edges.at(level + 1); }

  bool operator==(const FeatureBins&) const = default;
};

/// A Dataset with every cell replaced by its 0-based level.
class BinnedDataset {
 public:
  BinnedDataset() = default;
  BinnedDataset(FeatureSchema schema, std::vector<std::size_t> level_counts,
                std::vector<std::vector<int>> levels, std::vector<int> labels);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return levels_.size(); }
  std::size_t n_classes() const { return schema_.n_classes(); }
  FeatureKind kind(std::size_t f) const { return schema_.feature(f).kind; }
  std::size_t level_count(std::size_t f) const { return level_counts_.at(f); }
  const std::vector<std::size_t>& level_counts() const { return level_counts_; }

  std::span<const int> column(std::size_t f) const { return levels_.at(f); }
  int level(std::size_t i, std::size_t f) const { return levels_[f][i]; }
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  std::vector<std::size_t> class_counts() const;
  BinnedDataset subset(std::span<const std::size_t> indices) const;
  BinnedDataset with_labels(std::vector<int> labels) const;

 private:
  FeatureSchema schema_;
  std::vector<std::size_t> level_counts_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> labels_;
};

/// Empirical-quantile binning fitted on training data.
class BinMap {
 public:
  BinMap() = default;
  explicit BinMap(std::vector<FeatureBins> features) : features_(std::move(features)) {}

  /// Edges are the linear-interpolation quantiles at i/n_bins; duplicate
  /// edges merge, so a feature may end up with fewer than n_bins bins.
  /// Requires an imputed dataset.
  static BinMap fit(const Dataset& train, std::size_t n_bins);
  BinnedDataset apply(const Dataset& ds) const;

  std::size_t n_features() const { return features_.size(); }
  const FeatureBins& feature(std::size_t f) const { return features_.at(f); }
  const std::vector<FeatureBins>& features() const { return features_; }

  bool operator==(const BinMap&) const = default;

 private:
  std::vector<FeatureBins> features_;
};

/// Linear-interpolation quantile of sorted values (q in [0,1]).
double quantile_sorted(std::span<const double> sorted, double q);

/// Continuous levels are written 1-based, categories and labels by name.
void write_binned_csv(const BinnedDataset& ds, std::ostream& out);

}  // namespace rulemine::data
