#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rulemine/alt/assoc_rules.hpp"
#include "rulemine/data/dataset.hpp"
#include "rulemine/data/imputer.hpp"
#include "rulemine/data/quantizer.hpp"
#include "rulemine/features/local_features.hpp"
#include "rulemine/learn/model.hpp"
#include "rulemine/mining/miner.hpp"

namespace rulemine::eval {

enum class RuleSource { None, Rulemine, Tree, Assoc };
enum class Classifier { L1LR, L2LR, SvmLinear, SvmRbf, RandomForest };

/// A feature source paired with a classifier, e.g. "RM1D-L2LR" or "RF".
struct Strategy {
  RuleSource source = RuleSource::None;
  std::size_t dimension = 1;  // for RuleSource::Rulemine
  Classifier classifier = Classifier::L2LR;

  /// Accepted: L1LR, L2LR, SVM-lin, SVM-rbf, RF, each optionally prefixed by
  /// RM1D-, RM2D-, RMDT- or RMAR-. Throws ConfigError.
  static Strategy parse(const std::string& name);
  std::string name() const;
  bool uses_rules() const { return source != RuleSource::None; }
  bool operator==(const Strategy&) const = default;
};

std::string classifier_name(Classifier c);

struct HyperParams {
  double C = 1.0;
  std::size_t n_trees = 100;
  bool operator==(const HyperParams&) const = default;
};

/// The grid a classifier searches: C values, or tree counts for forests.
std::vector<HyperParams> grid_for(Classifier c, const std::vector<double>& c_grid,
                                  const std::vector<std::size_t>& tree_grid);
std::string describe(Classifier c, const HyperParams& hp);

struct PipelineConfig {
  std::size_t n_bins = 10;
  double z_min = 1.96;
  mining::ZVariant z_variant = mining::ZVariant::AsPrinted;
  /// Encoding of rulemine features; tree and association rules are always
  /// binary-encoded.
  features::Encoding encoding = features::Encoding::Distance;
  features::FrequencyScope frequency = features::FrequencyScope::PerClass;
  std::size_t assoc_max_items = 3;
  std::size_t assoc_min_support = 0;
  double gamma = 0.0;  // 0: default_gamma of the training features
  learn::SvmLoss svm_loss = learn::SvmLoss::SquaredHinge;
  learn::OptimizerBudget budget;
  std::size_t forest_min_leaf = 1;
  bool forest_bootstrap = true;
  unsigned jobs = 1;
};

/// Everything fitted before the classifier: imputer, bins and rules.
struct Preprocessor {
  Strategy strategy;
  data::Imputer imputer;
  data::BinMap bins;
  mining::RuleSet rules;
  features::DeltaWeights weights;
  features::Encoding encoding = features::Encoding::Distance;

  static Preprocessor fit(const Strategy& strategy, const PipelineConfig& config,
                          const data::Dataset& train);
  /// Classifier input for any dataset with the training schema.
  Matrix features(const data::Dataset& ds, unsigned jobs = 1) const;
  std::vector<learn::ColumnKind> column_kinds(const data::FeatureSchema& schema) const;
};

learn::Model train_classifier(Classifier c, const HyperParams& hp, const PipelineConfig& config,
                              const Matrix& X, std::span<const int> y, std::size_t n_classes,
                              std::span<const learn::ColumnKind> kinds, std::uint64_t seed);

struct FittedPipeline {
  Preprocessor pre;
  HyperParams hp;
  learn::Model model;

  std::vector<int> predict(const data::Dataset& ds) const;
};

FittedPipeline fit_pipeline(const Strategy& strategy, const PipelineConfig& config,
                            const HyperParams& hp, const data::Dataset& train, std::uint64_t seed);

struct GridSearchResult {
  std::size_t best = 0;
  std::vector<double> mean_scores;  // per grid point
};

/// Picks the grid point with the highest mean fold score; ties go to the
/// earliest point. score_fold(f) returns one score per grid point.
GridSearchResult grid_search(std::size_t n_points, std::size_t n_folds,
                             const std::function<std::vector<double>(std::size_t)>& score_fold);

/// Inner stratified k-fold grid search scored by weighted F1. Imputation,
/// binning and mining are refitted on each fold's training part unless
/// refit_per_fold is false, in which case they are fitted once on `train`.
GridSearchResult grid_search(const Strategy& strategy, const PipelineConfig& config,
                             const std::vector<HyperParams>& grid, const data::Dataset& train,
                             std::size_t k_folds, std::uint64_t seed, bool refit_per_fold = true);

}  // namespace rulemine::eval
