#include "rulemine/learn/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "rulemine/error.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::learn {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double sum_sq_over(const std::vector<double>& counts, double total) {
  if (total <= 0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += c * c;
  return s / total;
}

class Grower {
 public:
  Grower(const Matrix& X, std::span<const int> y, std::size_t n_classes,
         std::span<const ColumnKind> kinds, const TreeParams& params, std::span<const double> w,
         std::uint64_t seed)
      : X_(X), y_(y), K_(n_classes), kinds_(kinds), params_(params), w_(w), rng_(seed) {}

  TreeModel grow(std::vector<std::size_t> root) {
    TreeModel tree;
    tree.kinds.assign(kinds_.begin(), kinds_.end());
    tree.n_classes = K_;
    struct Pending {
      std::vector<std::size_t> idx;
      int node;
      int parent;
      bool left;
    };
    std::vector<Pending> stack;
    stack.push_back({std::move(root), -1, -1, false});
    while (!stack.empty()) {
      Pending item = std::move(stack.back());
      stack.pop_back();
      int id = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      if (item.parent >= 0) {
        if (item.left)
          tree.nodes[item.parent].left = id;
        else
          tree.nodes[item.parent].right = id;
      }
      TreeNode& node = tree.nodes.back();
      node.n_samples = item.idx.size();
      node.leaf_class = majority(item.idx);
      Split split = best_split(item.idx);
      if (split.feature < 0) continue;
      node.feature = split.feature;
      node.threshold = split.threshold;
      std::vector<std::size_t> left, right;
      for (std::size_t i : item.idx)
        (goes_left(split.feature, split.threshold, X_(i, split.feature)) ? left : right)
            .push_back(i);
      // Right pushed first so the left subtree is numbered first (preorder).
      stack.push_back({std::move(right), -1, id, false});
      stack.push_back({std::move(left), -1, id, true});
    }
    return tree;
  }

 private:
  double weight(std::size_t i) const { return w_.empty() ? 1.0 : w_[i]; }

  bool goes_left(int f, double threshold, double x) const {
    return kinds_[f] == ColumnKind::Ordinal ? x <= threshold : x == threshold;
  }

  int majority(const std::vector<std::size_t>& idx) const {
    std::vector<double> wc(K_, 0.0);
    std::vector<std::size_t> nc(K_, 0);
    for (std::size_t i : idx) {
      wc[y_[i]] += weight(i);
      ++nc[y_[i]];
    }
    int best = 0;
    for (std::size_t k = 1; k < K_; ++k)
      if (wc[k] > wc[best] || (wc[k] == wc[best] && nc[k] > nc[best])) best = static_cast<int>(k);
    return best;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t p = kinds_.size();
    std::vector<std::size_t> all(p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (params_.max_features == 0 || params_.max_features >= p) return all;
    for (std::size_t i = 0; i < params_.max_features; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng_.below(p - i));
      std::swap(all[i], all[j]);
    }
    all.resize(params_.max_features);
    std::sort(all.begin(), all.end());
    return all;
  }

  Split best_split(const std::vector<std::size_t>& idx) {
    const std::size_t n = idx.size();
    std::vector<double> total(K_, 0.0);
    std::size_t distinct_classes = 0;
    {
      std::vector<std::size_t> nc(K_, 0);
      for (std::size_t i : idx) {
        total[y_[i]] += weight(i);
        ++nc[y_[i]];
      }
      for (std::size_t c : nc) distinct_classes += c > 0;
    }
    // The feature subset is drawn even for terminal nodes so the random
    // stream does not depend on where growth stops.
    auto features = candidate_features();
    Split best;
    if (distinct_classes < 2 || n < 2 * std::max<std::size_t>(1, params_.min_leaf)) return best;
    double W = std::accumulate(total.begin(), total.end(), 0.0);
    double parent = sum_sq_over(total, W);
    double eps = 1e-12 * std::max(1.0, W);
    best.gain = eps;

    std::vector<std::pair<double, std::size_t>> order(n);
    std::vector<double> lc(K_), rc(K_);
    for (std::size_t f : features) {
      for (std::size_t r = 0; r < n; ++r) order[r] = {X_(idx[r], f), idx[r]};
      std::sort(order.begin(), order.end());
      if (order.front().first == order.back().first) continue;
      if (kinds_[f] == ColumnKind::Ordinal) {
        std::fill(lc.begin(), lc.end(), 0.0);
        double WL = 0.0;
        for (std::size_t r = 0; r + 1 < n; ++r) {
          std::size_t i = order[r].second;
          lc[y_[i]] += weight(i);
          WL += weight(i);
          if (order[r].first == order[r + 1].first) continue;
          std::size_t nl = r + 1, nr = n - nl;
          if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
          for (std::size_t k = 0; k < K_; ++k) rc[k] = total[k] - lc[k];
          double gain = sum_sq_over(lc, WL) + sum_sq_over(rc, W - WL) - parent;
          if (gain > best.gain) best = {static_cast<int>(f), order[r].first, gain};
        }
      } else {
        for (std::size_t r = 0; r < n;) {
          std::size_t e = r;
          std::fill(lc.begin(), lc.end(), 0.0);
          double WL = 0.0;
          while (e < n && order[e].first == order[r].first) {
            lc[y_[order[e].second]] += weight(order[e].second);
            WL += weight(order[e].second);
            ++e;
          }
          std::size_t nl = e - r, nr = n - nl;
          if (nl >= params_.min_leaf && nr >= params_.min_leaf) {
            for (std::size_t k = 0; k < K_; ++k) rc[k] = total[k] - lc[k];
            double gain = sum_sq_over(lc, WL) + sum_sq_over(rc, W - WL) - parent;
            if (gain > best.gain) best = {static_cast<int>(f), order[r].first, gain};
          }
          r = e;
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  std::span<const int> y_;
  std::size_t K_;
  std::span<const ColumnKind> kinds_;
  TreeParams params_;
  std::span<const double> w_;
  Rng rng_;
};

void check_tree_inputs(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                       std::span<const ColumnKind> kinds, std::span<const double> w) {
  if (X.rows() != y.size()) throw DataError("feature matrix and labels differ in length");
  if (X.cols() != kinds.size()) throw DataError("column kinds do not match the feature matrix");
  if (!w.empty() && w.size() != y.size())
    throw DataError("sample weights and labels differ in length");
  if (y.empty()) throw DataError("cannot grow a tree on zero samples");
  if (n_classes == 0) throw ConfigError("tree needs at least one class");
  for (int label : y)
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
      throw DataError("label " + std::to_string(label) + " out of range");
}

}  // namespace

std::size_t TreeModel::leaf_of(std::span<const double> x) const {
  if (x.size() != kinds.size())
    throw DataError("tree expects " + std::to_string(kinds.size()) + " columns, got " +
                    std::to_string(x.size()));
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& node = nodes[id];
    double v = x[node.feature];
    bool left = kinds[node.feature] == ColumnKind::Ordinal ? v <= node.threshold
                                                           : v == node.threshold;
    id = static_cast<std::size_t>(left ? node.left : node.right);
  }
  return id;
}

std::vector<std::size_t> TreeModel::used_features() const {
  std::set<std::size_t> s;
  for (const auto& node : nodes)
    if (!node.is_leaf()) s.insert(static_cast<std::size_t>(node.feature));
  return {s.begin(), s.end()};
}

std::vector<std::size_t> TreeModel::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].is_leaf()) out.push_back(i);
  return out;
}

TreeModel train_cart(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                     std::span<const ColumnKind> kinds, const TreeParams& params,
                     std::span<const double> sample_weights, std::uint64_t seed) {
  check_tree_inputs(X, y, n_classes, kinds, sample_weights);
  if (params.min_leaf == 0) throw ConfigError("min_leaf must be at least 1");
  std::vector<std::size_t> root(X.rows());
  std::iota(root.begin(), root.end(), std::size_t{0});
  return Grower(X, y, n_classes, kinds, params, sample_weights, seed).grow(std::move(root));
}

std::vector<std::size_t> ForestModel::votes(std::span<const double> x) const {
  std::vector<std::size_t> v(n_classes, 0);
  for (const auto& tree : trees) ++v[tree.predict_row(x)];
  return v;
}

std::vector<std::size_t> ForestModel::used_features() const {
  std::set<std::size_t> s;
  for (const auto& tree : trees)
    for (std::size_t f : tree.used_features()) s.insert(f);
  return {s.begin(), s.end()};
}

ForestModel train_forest(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                         std::span<const ColumnKind> kinds, const ForestParams& params,
                         std::span<const double> sample_weights) {
  check_tree_inputs(X, y, n_classes, kinds, sample_weights);
  if (params.n_trees == 0) throw ConfigError("forest needs at least one tree");
  if (params.min_leaf == 0) throw ConfigError("min_leaf must be at least 1");
  const std::size_t n = X.rows(), p = X.cols();
  TreeParams tp;
  tp.min_leaf = params.min_leaf;
  tp.max_features = params.max_features
                        ? params.max_features
                        : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p))));

  ForestModel forest;
  forest.n_classes = n_classes;
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    std::vector<std::size_t> idx(n);
    if (params.bootstrap) {
      Rng rng(derive_seed(params.seed, "bootstrap", {t}));
      for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
      std::sort(idx.begin(), idx.end());
    } else {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
    }
    Matrix Xb = X.select_rows(idx);
    std::vector<int> yb;
    std::vector<double> wb;
    for (std::size_t i : idx) {
      yb.push_back(y[i]);
      if (!sample_weights.empty()) wb.push_back(sample_weights[i]);
    }
    forest.trees.push_back(
        train_cart(Xb, yb, n_classes, kinds, tp, wb, derive_seed(params.seed, "tree", {t})));
    forest.training_indices.push_back(std::move(idx));
  }
  return forest;
}

}  // namespace rulemine::learn
