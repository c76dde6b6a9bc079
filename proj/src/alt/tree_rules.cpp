#include "rulemine/alt/tree_rules.hpp"

#include <algorithm>
#include <cmath>

#include "rulemine/data/encode.hpp"
#include "rulemine/error.hpp"
#include "rulemine/mining/miner.hpp"

namespace rulemine::alt {

using mining::CategorySet;
using mining::Condition;
using mining::Interval;

std::vector<learn::ColumnKind> level_kinds(const data::BinnedDataset& data) {
  std::vector<learn::ColumnKind> kinds;
  for (std::size_t f = 0; f < data.n_features(); ++f)
    kinds.push_back(data.kind(f) == data::FeatureKind::Continuous ? learn::ColumnKind::Ordinal
                                                                   : learn::ColumnKind::Categorical);
  return kinds;
}

namespace {

struct PathState {
  std::vector<int> lo, hi;
  std::vector<std::uint64_t> mask;
};

void walk(const learn::TreeModel& tree, std::size_t id, PathState state,
          const data::BinnedDataset& data, mining::ZVariant z_variant, mining::RuleSet& out) {
  const auto& node = tree.nodes[id];
  if (node.is_leaf()) {
    mining::Rule rule;
    rule.target_class = node.leaf_class;
    for (std::size_t f = 0; f < data.n_features(); ++f) {
      const int k = static_cast<int>(data.level_count(f));
      if (data.kind(f) == data::FeatureKind::Continuous) {
        if (state.lo[f] > 0 || state.hi[f] < k - 1)
          rule.conditions.push_back({f, Interval{state.lo[f], state.hi[f]}});
      } else {
        const std::uint64_t full = (k >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
        if (state.mask[f] != full) rule.conditions.push_back({f, CategorySet{state.mask[f]}});
      }
    }
    rule.stats = mining::score_rule(rule.conditions, rule.target_class, data, z_variant);
    out.by_class.at(rule.target_class).push_back(std::move(rule));
    return;
  }
  const auto f = static_cast<std::size_t>(node.feature);
  PathState left = state, right = std::move(state);
  if (data.kind(f) == data::FeatureKind::Continuous) {
    const int t = static_cast<int>(std::floor(node.threshold));
    left.hi[f] = std::min(left.hi[f], t);
    right.lo[f] = std::max(right.lo[f], t + 1);
  } else {
    const std::uint64_t bit = std::uint64_t{1} << static_cast<int>(node.threshold);
    left.mask[f] &= bit;
    right.mask[f] &= ~bit;
  }
  walk(tree, node.left, std::move(left), data, z_variant, out);
  walk(tree, node.right, std::move(right), data, z_variant, out);
}

}  // namespace

mining::RuleSet rules_from_tree(const learn::TreeModel& tree, const data::BinnedDataset& data,
                                mining::ZVariant z_variant) {
  if (tree.n_features() != data.n_features())
    throw DataError("tree and dataset disagree on the feature count");
  PathState root;
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    const std::size_t k = data.level_count(f);
    if (data.kind(f) == data::FeatureKind::Categorical && k > 64)
      throw ConfigError("categorical arity above 64 is not supported");
    root.lo.push_back(0);
    root.hi.push_back(static_cast<int>(k) - 1);
    root.mask.push_back(k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1);
  }
  mining::RuleSet out(data.n_classes());
  walk(tree, 0, std::move(root), data, z_variant, out);
  out.canonicalize();
  return out;
}

mining::RuleSet tree_rules(const data::BinnedDataset& data, const TreeRuleConfig& config) {
  if (config.n_bins == 0) throw ConfigError("bin count must be positive");
  if (data.n_samples() == 0) throw DataError("cannot grow rules on an empty dataset");
  learn::TreeParams params;
  params.min_leaf = config.min_leaf;
  if (params.min_leaf == 0) {
    std::size_t minority = data.n_samples();
    for (auto c : data.class_counts())
      if (c > 0) minority = std::min(minority, c);
    params.min_leaf = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(minority) /
                                              static_cast<double>(config.n_bins))));
  }
  auto kinds = level_kinds(data);
  auto X = data::level_matrix(data);
  auto tree = learn::train_cart(X, data.labels(), data.n_classes(), kinds, params);
  return rules_from_tree(tree, data, config.z_variant);
}

}  // namespace rulemine::alt
