#include "rulemine/data/encode.hpp"

namespace rulemine::data {

namespace {

bool expands(const BinnedDataset& ds, std::size_t f, OneHotMode mode) {
  return mode == OneHotMode::AllFeatures || ds.kind(f) == FeatureKind::Categorical;
}

}  // namespace

Matrix one_hot(const BinnedDataset& ds, OneHotMode mode) {
  std::vector<std::size_t> offset(ds.n_features());
  std::size_t cols = 0;
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    offset[f] = cols;
    cols += expands(ds, f, mode) ? ds.level_count(f) : 1;
  }
  Matrix m(ds.n_samples(), cols);
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    const bool hot = expands(ds, f, mode);
    auto col = ds.column(f);
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
      if (hot)
        m(i, offset[f] + static_cast<std::size_t>(col[i])) = 1.0;
      else
        m(i, offset[f]) = static_cast<double>(col[i] + 1);
    }
  }
  return m;
}

std::vector<std::string> one_hot_names(const BinnedDataset& ds, OneHotMode mode) {
  std::vector<std::string> names;
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    const auto& spec = ds.schema().feature(f);
    if (!expands(ds, f, mode)) {
      names.push_back(spec.name);
    } else if (spec.kind == FeatureKind::Categorical) {
      for (const auto& c : spec.categories) names.push_back(spec.name + "=" + c);
    } else {
      for (std::size_t b = 0; b < ds.level_count(f); ++b)
        names.push_back(spec.name + "=bin" + std::to_string(b + 1));
    }
  }
  return names;
}

Matrix level_matrix(const BinnedDataset& ds) {
  Matrix m(ds.n_samples(), ds.n_features());
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    auto col = ds.column(f);
    for (std::size_t i = 0; i < ds.n_samples(); ++i) m(i, f) = col[i];
  }
  return m;
}

}  // namespace rulemine::data
