#include "rulemine/eval/pipeline.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "rulemine/alt/tree_rules.hpp"
#include "rulemine/data/encode.hpp"
#include "rulemine/data/csv.hpp"
#include "rulemine/error.hpp"
#include "rulemine/eval/metrics.hpp"
#include "rulemine/eval/splits.hpp"
#include "rulemine/learn/class_weights.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::eval {

std::string classifier_name(Classifier c) {
  switch (c) {
    case Classifier::L1LR: return "L1LR";
    case Classifier::L2LR: return "L2LR";
    case Classifier::SvmLinear: return "SVM-lin";
    case Classifier::SvmRbf: return "SVM-rbf";
    case Classifier::RandomForest: return "RF";
  }
  return "?";
}

Strategy Strategy::parse(const std::string& name) {
  Strategy s;
  std::string rest = name;
  auto strip = [&](const std::string& prefix) {
    if (rest.rfind(prefix, 0) != 0) return false;
    rest = rest.substr(prefix.size());
    return true;
  };
  if (strip("RM1D-")) {
    s.source = RuleSource::Rulemine;
    s.dimension = 1;
  } else if (strip("RM2D-")) {
    s.source = RuleSource::Rulemine;
    s.dimension = 2;
  } else if (strip("RMDT-")) {
    s.source = RuleSource::Tree;
  } else if (strip("RMAR-")) {
    s.source = RuleSource::Assoc;
  }
  for (auto c : {Classifier::L1LR, Classifier::L2LR, Classifier::SvmLinear, Classifier::SvmRbf,
                 Classifier::RandomForest})
    if (rest == classifier_name(c)) {
      s.classifier = c;
      return s;
    }
  throw ConfigError("unknown strategy '" + name + "'");
}

std::string Strategy::name() const {
  std::string prefix;
  switch (source) {
    case RuleSource::None: break;
    case RuleSource::Rulemine: prefix = dimension == 2 ? "RM2D-" : "RM1D-"; break;
    case RuleSource::Tree: prefix = "RMDT-"; break;
    case RuleSource::Assoc: prefix = "RMAR-"; break;
  }
  return prefix + classifier_name(classifier);
}

std::vector<HyperParams> grid_for(Classifier c, const std::vector<double>& c_grid,
                                  const std::vector<std::size_t>& tree_grid) {
  std::vector<HyperParams> out;
  if (c == Classifier::RandomForest) {
    for (auto t : tree_grid) out.push_back({1.0, t});
  } else {
    for (double v : c_grid) out.push_back({v, 100});
  }
  if (out.empty()) throw ConfigError("empty hyperparameter grid for " + classifier_name(c));
  return out;
}

std::string describe(Classifier c, const HyperParams& hp) {
  if (c == Classifier::RandomForest) return "n_trees=" + std::to_string(hp.n_trees);
  return "C=" + data::format_double(hp.C);
}

Preprocessor Preprocessor::fit(const Strategy& strategy, const PipelineConfig& config,
                               const data::Dataset& train) {
  Preprocessor p;
  p.strategy = strategy;
  p.imputer = data::Imputer::fit(train);
  const data::Dataset imp = p.imputer.apply(train);
  p.bins = data::BinMap::fit(imp, config.n_bins);
  const data::BinnedDataset binned = p.bins.apply(imp);
  switch (strategy.source) {
    case RuleSource::None:
      p.rules = mining::RuleSet(train.n_classes());
      break;
    case RuleSource::Rulemine: {
      mining::MiningConfig mc;
      mc.max_dimension = strategy.dimension;
      mc.z_min = config.z_min;
      mc.n_bins = config.n_bins;
      mc.z_variant = config.z_variant;
      mc.jobs = config.jobs;
      p.rules = mining::mine(binned, mc);
      p.encoding = config.encoding;
      break;
    }
    case RuleSource::Tree: {
      alt::TreeRuleConfig tc;
      tc.n_bins = config.n_bins;
      tc.z_variant = config.z_variant;
      p.rules = alt::tree_rules(binned, tc);
      p.encoding = features::Encoding::Binary;
      break;
    }
    case RuleSource::Assoc: {
      alt::AssocRuleConfig ac;
      ac.max_items = config.assoc_max_items;
      ac.min_support = config.assoc_min_support;
      ac.z_min = config.z_min;
      ac.n_bins = config.n_bins;
      ac.z_variant = config.z_variant;
      p.rules = alt::assoc_rules(binned, ac);
      p.encoding = features::Encoding::Binary;
      break;
    }
  }
  p.weights = features::DeltaWeights::fit(imp, p.rules, config.frequency);
  return p;
}

Matrix Preprocessor::features(const data::Dataset& ds, unsigned jobs) const {
  const data::Dataset imp = imputer.apply(ds);
  if (strategy.source == RuleSource::None) {
    const data::BinnedDataset binned = bins.apply(imp);
    if (strategy.classifier == Classifier::RandomForest) return data::level_matrix(binned);
    return data::one_hot(binned, data::OneHotMode::CategoricalOnly);
  }
  return features::transform(imp, rules, bins, weights, encoding, jobs).values;
}

std::vector<learn::ColumnKind> Preprocessor::column_kinds(const data::FeatureSchema& schema) const {
  if (strategy.source == RuleSource::None && strategy.classifier == Classifier::RandomForest) {
    std::vector<learn::ColumnKind> kinds;
    for (const auto& f : schema.features())
      kinds.push_back(f.kind == data::FeatureKind::Continuous ? learn::ColumnKind::Ordinal
                                                               : learn::ColumnKind::Categorical);
    return kinds;
  }
  std::size_t cols = rules.size();
  if (strategy.source == RuleSource::None) {
    cols = 0;
    for (std::size_t f = 0; f < schema.n_features(); ++f)
      cols += schema.feature(f).kind == data::FeatureKind::Continuous
                  ? 1
                  : bins.feature(f).level_count();
  }
  return std::vector<learn::ColumnKind>(cols, learn::ColumnKind::Ordinal);
}

learn::Model train_classifier(Classifier c, const HyperParams& hp, const PipelineConfig& config,
                              const Matrix& X, std::span<const int> y, std::size_t n_classes,
                              std::span<const learn::ColumnKind> kinds, std::uint64_t seed) {
  const auto weights = learn::balanced_sample_weights(y, n_classes);
  switch (c) {
    case Classifier::L1LR:
      return learn::train_logreg(X, y, n_classes, learn::LinearKind::LogisticL1, hp.C, weights,
                                 config.budget);
    case Classifier::L2LR:
      return learn::train_logreg(X, y, n_classes, learn::LinearKind::LogisticL2, hp.C, weights,
                                 config.budget);
    case Classifier::SvmLinear:
      return learn::train_linear_svm(X, y, n_classes, hp.C, weights, seed, config.svm_loss,
                                     config.budget);
    case Classifier::SvmRbf: {
      const double gamma = config.gamma > 0 ? config.gamma : learn::default_gamma(X);
      return learn::train_rbf_svm(X, y, n_classes, hp.C, gamma, weights);
    }
    case Classifier::RandomForest: {
      learn::ForestParams fp;
      fp.n_trees = hp.n_trees;
      fp.min_leaf = config.forest_min_leaf;
      fp.bootstrap = config.forest_bootstrap;
      fp.seed = seed;
      return learn::train_forest(X, y, n_classes, kinds, fp, weights);
    }
  }
  throw InvariantError("unhandled classifier");
}

std::vector<int> FittedPipeline::predict(const data::Dataset& ds) const {
  return learn::predict(model, pre.features(ds));
}

FittedPipeline fit_pipeline(const Strategy& strategy, const PipelineConfig& config,
                            const HyperParams& hp, const data::Dataset& train, std::uint64_t seed) {
  FittedPipeline fp;
  fp.pre = Preprocessor::fit(strategy, config, train);
  fp.hp = hp;
  const Matrix X = fp.pre.features(train, config.jobs);
  const auto kinds = fp.pre.column_kinds(train.schema());
  fp.model = train_classifier(strategy.classifier, hp, config, X, train.labels(),
                              train.n_classes(), kinds, seed);
  return fp;
}

GridSearchResult grid_search(std::size_t n_points, std::size_t n_folds,
                             const std::function<std::vector<double>(std::size_t)>& score_fold) {
  if (n_points == 0) throw ConfigError("empty hyperparameter grid");
  if (n_folds == 0) throw ConfigError("fold count must be positive");
  GridSearchResult r;
  r.mean_scores.assign(n_points, 0.0);
  for (std::size_t f = 0; f < n_folds; ++f) {
    auto scores = score_fold(f);
    if (scores.size() != n_points) throw InvariantError("fold scored the wrong number of points");
    for (std::size_t g = 0; g < n_points; ++g) r.mean_scores[g] += scores[g];
  }
  for (auto& s : r.mean_scores) s /= static_cast<double>(n_folds);
  for (std::size_t g = 1; g < n_points; ++g)
    if (r.mean_scores[g] > r.mean_scores[r.best]) r.best = g;
  return r;
}

GridSearchResult grid_search(const Strategy& strategy, const PipelineConfig& config,
                             const std::vector<HyperParams>& grid, const data::Dataset& train,
                             std::size_t k_folds, std::uint64_t seed, bool refit_per_fold) {
  const auto folds =
      stratified_folds(train.labels(), train.n_classes(), k_folds, derive_seed(seed, "inner-cv"));
  std::optional<Preprocessor> shared;
  Matrix shared_X;
  if (!refit_per_fold) {
    shared = Preprocessor::fit(strategy, config, train);
    shared_X = shared->features(train, config.jobs);
  }
  return grid_search(grid.size(), folds.size(), [&](std::size_t f) {
    const data::Dataset fit_part = train.subset(folds[f].train);
    const data::Dataset held_out = train.subset(folds[f].test);
    Matrix Xtr, Xva;
    std::vector<learn::ColumnKind> kinds;
    if (shared) {
      Xtr = shared_X.select_rows(folds[f].train);
      Xva = shared_X.select_rows(folds[f].test);
      kinds = shared->column_kinds(train.schema());
    } else {
      const Preprocessor pre = Preprocessor::fit(strategy, config, fit_part);
      Xtr = pre.features(fit_part, config.jobs);
      Xva = pre.features(held_out, config.jobs);
      kinds = pre.column_kinds(train.schema());
    }
    std::vector<double> scores;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      auto model = train_classifier(strategy.classifier, grid[g], config, Xtr, fit_part.labels(),
                                    train.n_classes(), kinds, derive_seed(seed, "inner-model", {f, g}));
      scores.push_back(weighted_f1(held_out.labels(), learn::predict(model, Xva), train.n_classes()));
    }
    return scores;
  });
}

}  // namespace rulemine::eval
