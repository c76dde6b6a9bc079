#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "rulemine/learn/model.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::eval {

/// F1 on the confusion matrix weighted by n / (n_classes * count of the true
/// class), averaged over the classes present in y_true, times 100.
double weighted_f1(std::span<const int> y_true, std::span<const int> y_pred,
                   std::size_t n_classes);

/// (feature, bin) pairs.
using TupleSet = std::set<std::pair<std::size_t, int>>;

/// Every (feature, level) a rule condition admits.
TupleSet rule_tuples(const mining::RuleSet& rules);

/// |A & B| / |A | B|; 1 for two empty sets.
double jaccard(const TupleSet& a, const TupleSet& b);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);
double median(std::vector<double> values);

/// Pairwise Jaccard over all set pairs, times 100.
MeanStd jaccard_stability(std::span<const TupleSet> sets);

/// Input columns the model relies on: all columns for dense models, columns
/// with a nonzero weight for L1 logistic models, split features for trees.
std::size_t model_complexity(const learn::Model& model);

}  // namespace rulemine::eval
