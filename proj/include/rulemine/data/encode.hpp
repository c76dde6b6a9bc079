#pragma once

#include <string>
#include <vector>

#include "rulemine/data/quantizer.hpp"
#include "rulemine/matrix.hpp"

namespace rulemine::data {

enum class OneHotMode {
  AllFeatures,      // every feature expands to one indicator per level
  CategoricalOnly,  // continuous features stay a single 1-based bin-index column
};

/// Column order: features in schema order, then levels in order.
Matrix one_hot(const BinnedDataset& ds, OneHotMode mode = OneHotMode::AllFeatures);
std::vector<std::string> one_hot_names(const BinnedDataset& ds,
                                       OneHotMode mode = OneHotMode::AllFeatures);

/// Levels as doubles, one column per feature (tree and forest input).
Matrix level_matrix(const BinnedDataset& ds);

}  // namespace rulemine::data
