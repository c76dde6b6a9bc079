#pragma once

#include <cstddef>

#include "rulemine/data/quantizer.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::alt {

struct AssocRuleConfig {
  std::size_t max_items = 3;
  std::size_t min_support = 0;  // 0: size threshold of the smallest class
  double z_min = 1.96;
  std::size_t n_bins = 10;
  mining::ZVariant z_variant = mining::ZVariant::AsPrinted;
};

/// Apriori over single-level items (feature == level) on distinct features,
/// then every frequent itemset is scored against every class and kept when
/// it passes the z and class-size filter. No nesting resolution is applied.
mining::RuleSet assoc_rules(const data::BinnedDataset& data, const AssocRuleConfig& config = {});

}  // namespace rulemine::alt
