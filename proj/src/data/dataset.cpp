#include "rulemine/data/dataset.hpp"

#include <string>

#include "rulemine/error.hpp"

namespace rulemine::data {

Dataset::Dataset(FeatureSchema schema, std::vector<std::vector<double>> columns,
                 std::vector<int> labels)
    : schema_(std::move(schema)), columns_(std::move(columns)), labels_(std::move(labels)) {
  if (labels_.empty()) throw DataError("dataset has no samples");
  if (columns_.size() != schema_.n_features())
    throw DataError("dataset column count does not match schema");
  const auto n = labels_.size();
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    if (columns_[f].size() != n)
      throw DataError("column '" + schema_.feature(f).name + "' has wrong length");
    const auto& spec = schema_.feature(f);
    if (spec.kind != FeatureKind::Categorical) continue;
    for (double v : columns_[f]) {
      if (is_missing(v)) continue;
      if (v < 0 || v >= static_cast<double>(spec.categories.size()) || v != std::floor(v))
        throw DataError("invalid category index in column '" + spec.name + "'");
    }
  }
  for (int y : labels_)
    if (y < 0 || static_cast<std::size_t>(y) >= schema_.n_classes())
      throw DataError("class index out of range");
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes(), 0);
  for (int y : labels_) ++counts[y];
  return counts;
}

std::size_t Dataset::missing_count() const {
  std::size_t m = 0;
  for (const auto& col : columns_)
    for (double v : col) m += is_missing(v);
  return m;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) {
    cols[f].reserve(indices.size());
    for (auto i : indices) cols[f].push_back(columns_[f].at(i));
  }
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (auto i : indices) labels.push_back(labels_.at(i));
  return Dataset(schema_, std::move(cols), std::move(labels));
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
  return Dataset(schema_, columns_, std::move(labels));
}

bool Dataset::same_cells(const Dataset& other) const {
  if (n_samples() != other.n_samples() || n_features() != other.n_features()) return false;
  for (std::size_t f = 0; f < columns_.size(); ++f)
    for (std::size_t i = 0; i < n_samples(); ++i) {
      double a = columns_[f][i], b = other.columns_[f][i];
      if (is_missing(a) != is_missing(b)) return false;
      if (!is_missing(a) && a != b) return false;
    }
  return labels_ == other.labels_;
}

}  // namespace rulemine::data
