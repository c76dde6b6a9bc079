#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulemine/matrix.hpp"

namespace rulemine::learn {

enum class ColumnKind {
  Ordinal,      // split "x <= threshold"
  Categorical,  // split "x == category" (one-vs-rest)
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;   // samples satisfying the test
  int right = -1;  // the others
  int leaf_class = 0;
  std::size_t n_samples = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;  // per-split random subset size; 0 = all features
};

/// CART classifier grown with the (weighted) Gini criterion.
struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<ColumnKind> kinds;
  std::size_t n_classes = 0;

  std::size_t n_features() const { return kinds.size(); }
  /// Index of the leaf reached by a sample.
  std::size_t leaf_of(std::span<const double> x) const;
  int predict_row(std::span<const double> x) const { return nodes[leaf_of(x)].leaf_class; }
  std::vector<std::size_t> used_features() const;
  std::vector<std::size_t> leaves() const;

  bool operator==(const TreeModel&) const = default;
};

/// Exhaustive split search over every (feature, threshold) and
/// (feature, category) pair; a split is accepted when its Gini decrease is
/// positive and both children hold at least min_leaf samples. Ties go to the
/// lower feature index, then the lower threshold. With max_features > 0 a
/// random feature subset is drawn per node from `seed`. Empty weights mean
/// uniform weights.
TreeModel train_cart(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                     std::span<const ColumnKind> kinds, const TreeParams& params,
                     std::span<const double> sample_weights = {}, std::uint64_t seed = 0);

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t min_leaf = 1;
  std::size_t max_features = 0;  // 0 = ceil(sqrt(n_features))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::vector<std::size_t>> training_indices;  // per tree
  std::size_t n_classes = 0;

  std::size_t n_features() const { return trees.empty() ? 0 : trees.front().n_features(); }
  std::vector<std::size_t> votes(std::span<const double> x) const;
  std::vector<std::size_t> used_features() const;
};

ForestModel train_forest(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                         std::span<const ColumnKind> kinds, const ForestParams& params,
                         std::span<const double> sample_weights = {});

}  // namespace rulemine::learn
