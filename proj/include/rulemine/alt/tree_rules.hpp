#pragma once

#include <cstddef>

#include "rulemine/data/quantizer.hpp"
#include "rulemine/learn/tree.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::alt {

struct TreeRuleConfig {
  std::size_t n_bins = 10;
  std::size_t min_leaf = 0;  // 0: ceil(n / n_bins * minority share)
  mining::ZVariant z_variant = mining::ZVariant::AsPrinted;
};

/// Column kinds for a level matrix of `data`.
std::vector<learn::ColumnKind> level_kinds(const data::BinnedDataset& data);

/// The root-to-leaf path of each leaf as a rule for the leaf's majority
/// class: ordinal splits narrow a bin interval, categorical splits narrow a
/// category set. Unconstrained features are left out, so a single-leaf tree
/// yields one rule with no conditions.
mining::RuleSet rules_from_tree(const learn::TreeModel& tree, const data::BinnedDataset& data,
                                mining::ZVariant z_variant = mining::ZVariant::AsPrinted);

/// Grows an unweighted CART tree on the bin levels and converts its leaves.
mining::RuleSet tree_rules(const data::BinnedDataset& data, const TreeRuleConfig& config = {});

}  // namespace rulemine::alt
