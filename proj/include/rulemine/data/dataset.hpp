#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "rulemine/data/schema.hpp"

namespace rulemine::data {

/// Marker stored in a cell whose value was not observed.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Column-major samples. Continuous cells hold real values, categorical cells
/// hold the category index as a double; either may be kMissing.
class Dataset {
 public:
  Dataset() = default;
  /// Validates column lengths, n >= 1, category indices and labels.
  Dataset(FeatureSchema schema, std::vector<std::vector<double>> columns, std::vector<int> labels);

  const FeatureSchema& schema() const { return schema_; }
  std::size_t n_samples() const { return labels_.size(); }
  std::size_t n_features() const { return columns_.size(); }
  std::size_t n_classes() const { return schema_.n_classes(); }

  std::span<const double> column(std::size_t f) const { return columns_.at(f); }
  double value(std::size_t i, std::size_t f) const { return columns_[f][i]; }
  std::span<const int> labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }

  std::vector<std::size_t> class_counts() const;
  std::size_t missing_count() const;

  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset with_labels(std::vector<int> labels) const;

  bool same_cells(const Dataset& other) const;

 private:
  FeatureSchema schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<int> labels_;
};

}  // namespace rulemine::data
