#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rulemine/data/quantizer.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::mining {

/// Categorical features above this arity are rejected by the exhaustive
/// miner (2^k - 1 subsets).
inline constexpr std::size_t kMaxMinedArity = 20;

struct MiningConfig {
  std::size_t max_dimension = 1;  // 1 or 2
  double z_min = 1.96;
  std::size_t n_bins = 10;  // bin count used in the size threshold
  ZVariant z_variant = ZVariant::AsPrinted;
  unsigned jobs = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Continuous: every contiguous run of bins, ordered by (lo, hi).
/// Categorical: every non-empty category subset, ordered by mask.
std::vector<Condition> enumerate_candidates_1d(std::size_t feature, data::FeatureKind kind,
                                               std::size_t k);

/// Cross product of per-feature candidate lists, first feature outermost.
std::vector<std::vector<Condition>> enumerate_candidates_multi(
    std::span<const std::vector<Condition>> per_feature);

/// Membership counting over the binned data.
RuleStats score_rule(std::span<const Condition> conditions, int target_class,
                     const data::BinnedDataset& data, ZVariant variant = ZVariant::AsPrinted);

/// Keeps scorable rules with z >= z_min and class_count >= threshold, in order.
std::vector<Rule> select_rules(std::span<const Rule> candidates, double z_min, double threshold);

/// Resolves nesting among rules of one class. For every nested pair on the
/// same feature set the inner rule is dropped when the outer one has a z at
/// least as high; when the rules carry a continuous condition the outer rule
/// is dropped when the inner one has a strictly higher z. Domination is
/// judged against the whole input, so the result is a fixed point.
std::vector<Rule> prune_nested(std::span<const Rule> rules);

/// Per-class size thresholds: n / n_bins * (class count / n).
std::vector<double> class_size_thresholds(const data::BinnedDataset& data, std::size_t n_bins);

/// Exhaustive supervised rule mining for dimensions 1..max_dimension.
RuleSet mine(const data::BinnedDataset& data, const MiningConfig& config);

}  // namespace rulemine::mining
