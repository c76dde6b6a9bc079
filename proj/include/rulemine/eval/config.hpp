#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rulemine/data/dataset.hpp"
#include "rulemine/eval/pipeline.hpp"

namespace rulemine::eval {

struct DatasetSpec {
  enum class Kind { File, Synthetic };
  std::string name;
  Kind kind = Kind::File;
  std::filesystem::path csv;
  std::filesystem::path schema;
  double noise = 0.0;  // synthetic only
};

/// Built-in names: wdbc, iris, wine, balance-scale (files <name>.csv and
/// <name>.schema under data_dir), synthetic and synthetic-noisy (generated).
inline const std::vector<std::string> kBuiltinDatasets = {
    "wdbc", "iris", "wine", "balance-scale", "synthetic", "synthetic-noisy"};

/// Benchmark settings.
///
/// Text form: one "key = value" per line, '#' comments, lists separated by
/// commas. Keys:
///
///     seed               master seed (required)
///     datasets           dataset names
///     strategies         e.g. L2LR, RM1D-L2LR, RF, RMDT-SVM-lin
///     data_dir           directory of the built-in dataset files
///     dataset.<name>     csv path, schema path (defines a custom dataset)
///     c_grid, tree_grid  hyperparameter grids
///     splits, test_frac, folds
///     bins, z_min, z_variant (as-printed | standard)
///     encoding (distance | binary), frequency (per-class | global)
///     gamma (auto | value), max_iterations, tolerance
///     forest_min_leaf, forest_bootstrap, assoc_max_items, assoc_min_support
///     remine_per_fold, synthetic_n, synthetic_noise, missing_token, jobs
///
/// Relative paths resolve against the config file's directory.
struct BenchmarkConfig {
  std::uint64_t seed = 0;
  std::vector<DatasetSpec> datasets;
  std::vector<std::string> strategies;
  std::vector<double> c_grid = {1e-3, 1e-2, 1e-1, 1, 10, 100, 1000};
  std::vector<std::size_t> tree_grid = {100, 200, 300, 400, 500};
  std::size_t n_splits = 5;
  double test_frac = 0.3;
  std::size_t k_folds = 5;
  bool remine_per_fold = true;
  std::size_t synthetic_n = 500;
  double synthetic_noise = 0.12;
  std::string missing_token = "?";
  PipelineConfig pipeline;
  unsigned jobs = 1;

  /// Canonical "key = value" text of the resolved settings (paths excluded).
  std::string to_text() const;
};

/// Throws ConfigError naming the offending key.
BenchmarkConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                             const std::filesystem::path& default_data_dir);
BenchmarkConfig load_config(const std::filesystem::path& path,
                            const std::filesystem::path& default_data_dir);

data::Dataset load_dataset(const DatasetSpec& spec, const BenchmarkConfig& config);

}  // namespace rulemine::eval
