#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rulemine/eval/config.hpp"
#include "rulemine/eval/pipeline.hpp"
#include "rulemine/eval/splits.hpp"

namespace rulemine::eval {

struct CellResult {
  std::string dataset;
  std::string strategy;
  std::size_t split = 0;
  bool ok = false;
  std::string message;  // error text when !ok
  double f1 = 0.0;
  std::string best;  // chosen hyperparameters
  std::size_t complexity = 0;
  std::vector<double> grid_scores;
  mining::RuleSet rules;
};

struct DatasetInfo {
  std::string name;
  bool ok = false;
  std::string message;
  std::size_t n_samples = 0;
  std::string checksum;  // SHA-256 of the dataset as CSV text
  data::FeatureSchema schema;
};

struct BenchmarkResult {
  std::vector<DatasetInfo> datasets;
  std::vector<CellResult> cells;  // dataset-major, then strategy, then split
};

/// Seed of one (dataset, strategy, split) cell.
std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset,
                        const std::string& strategy, std::size_t split);

/// Seed of a dataset's outer split plan.
std::uint64_t split_seed(std::uint64_t master, const std::string& dataset);

/// One cell: inner grid search on the training part, final fit, test score.
/// `fitted` receives the final pipeline when given.
CellResult run_cell(const data::Dataset& ds, const Split& split, const Strategy& strategy,
                    const BenchmarkConfig& config, std::uint64_t seed,
                    FittedPipeline* fitted = nullptr);

using ProgressFn = std::function<void(const CellResult&)>;

/// Every dataset x strategy x split cell, run on config.jobs threads. Cell
/// failures are recorded in the result rather than thrown.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress = {});

enum class ReportFormat { Csv, Records };

/// Writes scores.csv, rules.jsonl, config.txt and run_manifest.txt, then the
/// report tables (see write_report).
void write_benchmark(const BenchmarkResult& result, const BenchmarkConfig& config,
                     const std::filesystem::path& out_dir, ReportFormat format);

/// Rebuilds the summary, per-level and rule-report tables from scores.csv and
/// rules.jsonl in `dir` alone. Returns the written paths.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                ReportFormat format);

}  // namespace rulemine::eval
