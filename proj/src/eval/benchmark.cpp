#include "rulemine/eval/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "rulemine/data/csv.hpp"
#include "rulemine/data/fetch.hpp"
#include "rulemine/error.hpp"
#include "rulemine/eval/metrics.hpp"
#include "rulemine/mining/rule_io.hpp"
#include "rulemine/parallel.hpp"
#include "rulemine/rng.hpp"
#include "rulemine/simd/kernels.hpp"

namespace rulemine::eval {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::string family_of(const Strategy& s) {
  switch (s.source) {
    case RuleSource::None: return s.classifier == Classifier::RandomForest ? "forest" : "global";
    case RuleSource::Rulemine: return "rulemine";
    case RuleSource::Tree: return "tree-rules";
    case RuleSource::Assoc: return "assoc-rules";
  }
  return "?";
}

std::string dataset_checksum(const data::Dataset& ds) {
  std::ostringstream out;
  data::write_csv(ds, out);
  return data::sha256_hex(out.str());
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, const std::string& dataset,
                        const std::string& strategy, std::size_t split) {
  return derive_seed(master, "cell/" + dataset + "/" + strategy, {split});
}

std::uint64_t split_seed(std::uint64_t master, const std::string& dataset) {
  return derive_seed(master, "splits/" + dataset);
}

CellResult run_cell(const data::Dataset& ds, const Split& split, const Strategy& strategy,
                    const BenchmarkConfig& config, std::uint64_t seed, FittedPipeline* fitted) {
  CellResult r;
  r.strategy = strategy.name();
  const data::Dataset train = ds.subset(split.train);
  const data::Dataset test = ds.subset(split.test);
  const auto grid = grid_for(strategy.classifier, config.c_grid, config.tree_grid);
  HyperParams best = grid.front();
  if (grid.size() > 1) {
    auto gs = grid_search(strategy, config.pipeline, grid, train, config.k_folds, seed,
                          config.remine_per_fold);
    best = grid[gs.best];
    r.grid_scores = gs.mean_scores;
  }
  FittedPipeline fp = fit_pipeline(strategy, config.pipeline, best, train, derive_seed(seed, "final"));
  r.f1 = weighted_f1(test.labels(), fp.predict(test), ds.n_classes());
  r.best = describe(strategy.classifier, best);
  r.complexity = model_complexity(fp.model);
  r.rules = fp.pre.rules;
  r.ok = true;
  if (fitted) *fitted = std::move(fp);
  return r;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress) {
  std::vector<Strategy> strategies;
  for (const auto& s : config.strategies) strategies.push_back(Strategy::parse(s));

  BenchmarkResult result;
  std::vector<data::Dataset> datasets(config.datasets.size());
  std::vector<std::vector<Split>> plans(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    DatasetInfo info;
    info.name = config.datasets[d].name;
    try {
      datasets[d] = load_dataset(config.datasets[d], config);
      info.n_samples = datasets[d].n_samples();
      info.checksum = dataset_checksum(datasets[d]);
      info.schema = datasets[d].schema();
      plans[d] = stratified_split(datasets[d].labels(), datasets[d].n_classes(), config.test_frac,
                                  config.n_splits, split_seed(config.seed, info.name));
      info.ok = true;
    } catch (const std::exception& e) {
      info.message = e.what();
    }
    result.datasets.push_back(std::move(info));
  }

  struct Job {
    std::size_t d, s, split;
  };
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < config.datasets.size(); ++d)
    for (std::size_t s = 0; s < strategies.size(); ++s)
      for (std::size_t k = 0; k < config.n_splits; ++k) jobs.push_back({d, s, k});

  BenchmarkConfig cell_config = config;
  cell_config.pipeline.jobs = 1;
  result.cells.resize(jobs.size());
  std::mutex progress_mu;
  parallel_for(jobs.size(), config.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto& info = result.datasets[job.d];
    CellResult r;
    if (!info.ok) {
      r.message = "dataset unavailable: " + info.message;
    } else {
      try {
        r = run_cell(datasets[job.d], plans[job.d][job.split], strategies[job.s], cell_config,
                     cell_seed(config.seed, info.name, config.strategies[job.s], job.split));
      } catch (const std::exception& e) {
        r = CellResult{};
        r.message = e.what();
      }
    }
    r.dataset = info.name;
    r.strategy = strategies[job.s].name();
    r.split = job.split;
    if (progress) {
      std::lock_guard lock(progress_mu);
      progress(r);
    }
    result.cells[j] = std::move(r);
  });
  return result;
}

void write_benchmark(const BenchmarkResult& result, const BenchmarkConfig& config,
                     const fs::path& out_dir, ReportFormat format) {
  fs::create_directories(out_dir);
  std::map<std::string, const DatasetInfo*> info;
  for (const auto& d : result.datasets) info[d.name] = &d;
  {
    auto out = open_out(out_dir / "scores.csv");
    out << "dataset,strategy,split,status,f1,best,complexity,n_rules,grid_scores,message\n";
    for (const auto& c : result.cells) {
      std::string grid;
      for (double g : c.grid_scores) grid += (grid.empty() ? "" : ";") + data::format_double(g);
      out << csv_field(c.dataset) << ',' << csv_field(c.strategy) << ',' << c.split << ','
          << (c.ok ? "ok" : "error") << ',' << (c.ok ? data::format_double(c.f1) : "") << ','
          << csv_field(c.best) << ',' << (c.ok ? std::to_string(c.complexity) : "") << ','
          << (c.ok ? std::to_string(c.rules.size()) : "") << ',' << grid << ','
          << csv_field(c.message) << '\n';
    }
  }
  {
    auto out = open_out(out_dir / "rules.jsonl");
    for (const auto& c : result.cells) {
      if (!c.ok) continue;
      const data::FeatureSchema* schema = &info.at(c.dataset)->schema;
      for (const auto& per_class : c.rules.by_class)
        for (const auto& r : per_class) {
          json rec = {{"dataset", c.dataset}, {"strategy", c.strategy}, {"split", c.split}};
          rec.update(mining::rule_record(r, schema));
          out << rec.dump() << '\n';
        }
    }
  }
  const std::string config_text = config.to_text();
  {
    auto out = open_out(out_dir / "config.txt");
    out << config_text;
  }
  {
    auto out = open_out(out_dir / "run_manifest.txt");
    std::size_t errors = 0;
    for (const auto& c : result.cells) errors += !c.ok;
    out << "format rulemine.benchmark 1\n";
    out << "seed " << config.seed << '\n';
    out << "config_sha256 " << data::sha256_hex(config_text) << '\n';
    out << "simd " << simd::isa_name(simd::active_isa()) << '\n';
    for (const auto& d : result.datasets) {
      if (d.ok)
        out << "dataset " << d.name << " n=" << d.n_samples << " sha256=" << d.checksum
            << " split_seed=" << split_seed(config.seed, d.name) << '\n';
      else
        out << "dataset " << d.name << " unavailable: " << d.message << '\n';
    }
    for (const auto& d : result.datasets)
      for (const auto& s : config.strategies)
        for (std::size_t k = 0; k < config.n_splits; ++k)
          out << "cell " << d.name << ' ' << s << ' ' << k
              << " seed=" << cell_seed(config.seed, d.name, s, k) << '\n';
    out << "cells " << result.cells.size() << " errors " << errors << '\n';
  }
  write_report(out_dir, format);
}

namespace {

struct ScoreRow {
  std::string dataset, strategy;
  std::size_t split = 0;
  bool ok = false;
  double f1 = 0.0;
  double complexity = 0.0;
};

struct Group {
  std::string dataset, strategy;
  std::vector<ScoreRow> rows;
};

std::vector<Group> read_scores(const fs::path& dir) {
  std::ifstream in(dir / "scores.csv");
  if (!in) throw DataError("cannot read " + (dir / "scores.csv").string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("dataset,strategy,split,status,f1", 0) != 0)
    throw DataError("scores.csv has an unexpected header");
  std::vector<Group> groups;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = csv_split(line);
    if (f.size() != 10) throw DataError("scores.csv line " + std::to_string(lineno) + ": bad field count");
    ScoreRow r;
    r.dataset = f[0];
    r.strategy = f[1];
    r.split = std::stoul(f[2]);
    r.ok = f[3] == "ok";
    if (r.ok) {
      r.f1 = std::stod(f[4]);
      r.complexity = std::stod(f[6]);
    }
    if (groups.empty() || groups.back().dataset != r.dataset || groups.back().strategy != r.strategy)
      groups.push_back({r.dataset, r.strategy, {}});
    groups.back().rows.push_back(r);
  }
  return groups;
}

struct RuleKey {
  std::string dataset, strategy;
  bool operator<(const RuleKey& o) const {
    return std::tie(dataset, strategy) < std::tie(o.dataset, o.strategy);
  }
};

struct RuleAgg {
  mining::Rule rule;
  json record;  // conditions with names, class and label
  std::set<std::size_t> splits;
  double z_sum = 0.0;
  std::size_t count = 0;
};

}  // namespace

std::vector<fs::path> write_report(const fs::path& dir, ReportFormat format) {
  const auto groups = read_scores(dir);

  std::map<RuleKey, std::map<std::size_t, TupleSet>> tuples;
  std::map<RuleKey, std::map<std::string, RuleAgg>> rule_aggs;
  {
    std::ifstream in(dir / "rules.jsonl");
    if (!in) throw DataError("cannot read " + (dir / "rules.jsonl").string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(std::string("rules.jsonl: ") + e.what());
      }
      RuleKey key{rec.at("dataset").get<std::string>(), rec.at("strategy").get<std::string>()};
      const auto split = rec.at("split").get<std::size_t>();
      mining::Rule rule = mining::rule_from_record(rec, 64);
      auto& ts = tuples[key][split];
      for (const auto& c : rule.conditions)
        for (int level : c.levels()) ts.emplace(c.feature, level);
      json ident = {{"class", rec.at("class")}, {"conditions", rec.at("conditions")}};
      if (rec.contains("label")) ident["label"] = rec.at("label");
      auto& agg = rule_aggs[key][ident.dump()];
      if (agg.count == 0) {
        agg.rule = rule;
        agg.record = ident;
      }
      agg.splits.insert(split);
      if (rule.stats.scorable()) agg.z_sum += rule.stats.z;
      ++agg.count;
    }
  }

  struct SummaryRow {
    std::string dataset, strategy, family;
    std::size_t ok = 0, errors = 0;
    MeanStd f1;
    double complexity = 0.0;
    bool has_rules = false;
    MeanStd stability;
  };
  std::vector<SummaryRow> summary;
  for (const auto& g : groups) {
    SummaryRow s;
    s.dataset = g.dataset;
    s.strategy = g.strategy;
    Strategy strat = Strategy::parse(g.strategy);
    s.family = family_of(strat);
    std::vector<double> f1s, comps;
    std::vector<TupleSet> sets;
    const auto tit = tuples.find({g.dataset, g.strategy});
    for (const auto& r : g.rows) {
      if (!r.ok) {
        ++s.errors;
        continue;
      }
      ++s.ok;
      f1s.push_back(r.f1);
      comps.push_back(r.complexity);
      if (strat.uses_rules()) {
        TupleSet ts;
        if (tit != tuples.end())
          if (auto it = tit->second.find(r.split); it != tit->second.end()) ts = it->second;
        sets.push_back(std::move(ts));
      }
    }
    s.f1 = mean_std(f1s);
    s.complexity = median(comps);
    s.has_rules = strat.uses_rules() && sets.size() >= 2;
    if (s.has_rules) s.stability = jaccard_stability(sets);
    summary.push_back(std::move(s));
  }

  auto fmt = data::format_double;
  auto ratio = [&](const MeanStd& m) {
    return m.std > 0 ? fmt(m.mean / m.std) : std::string(m.mean > 0 ? "inf" : "nan");
  };
  const std::vector<std::string> columns = {
      "dataset", "strategy", "family", "splits_ok", "splits_failed", "mean_f1", "std_f1",
      "mean_over_std", "median_complexity", "stability_mean", "stability_std"};
  auto cells_of = [&](const SummaryRow& s) -> std::vector<std::string> {
    const bool any = s.ok > 0;
    return {s.dataset,
            s.strategy,
            s.family,
            std::to_string(s.ok),
            std::to_string(s.errors),
            any ? fmt(s.f1.mean) : "",
            any ? fmt(s.f1.std) : "",
            any ? ratio(s.f1) : "",
            any ? fmt(s.complexity) : "",
            s.has_rules ? fmt(s.stability.mean) : "",
            s.has_rules ? fmt(s.stability.std) : ""};
  };

  std::vector<fs::path> written;
  const std::string ext = format == ReportFormat::Csv ? ".csv" : ".jsonl";
  auto write_table = [&](const std::string& stem, const std::vector<std::string>& cols,
                         const std::vector<std::vector<std::string>>& rows) {
    const fs::path p = dir / (stem + ext);
    auto out = open_out(p);
    if (format == ReportFormat::Csv) {
      for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
      out << '\n';
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << '\n';
      }
    } else {
      for (const auto& row : rows) {
        json rec = json::object();
        for (std::size_t i = 0; i < cols.size(); ++i) rec[cols[i]] = row[i];
        out << rec.dump() << '\n';
      }
    }
    written.push_back(p);
  };

  auto table_for = [&](std::initializer_list<const char*> families) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : summary)
      for (const char* f : families)
        if (s.family == f) rows.push_back(cells_of(s));
    return rows;
  };
  write_table("summary", columns,
              table_for({"global", "forest", "rulemine", "tree-rules", "assoc-rules"}));
  write_table("table_level1", columns, table_for({"global", "rulemine"}));
  write_table("table_level2", columns, table_for({"forest", "rulemine"}));
  write_table("table_level3", columns, table_for({"tree-rules", "assoc-rules", "rulemine"}));

  // Per-rule selection frequency and mean z, the data behind the rule figures.
  std::vector<std::vector<std::string>> rule_rows;
  for (const auto& s : summary) {
    auto it = rule_aggs.find({s.dataset, s.strategy});
    if (it == rule_aggs.end() || s.ok == 0) continue;
    std::vector<const RuleAgg*> aggs;
    for (const auto& [_, agg] : it->second) aggs.push_back(&agg);
    std::sort(aggs.begin(), aggs.end(), [](const RuleAgg* a, const RuleAgg* b) {
      if (a->rule.target_class != b->rule.target_class)
        return a->rule.target_class < b->rule.target_class;
      return mining::canonical_less(a->rule, b->rule);
    });
    for (const RuleAgg* agg : aggs) {
      std::string conds;
      for (const auto& jc : agg->record.at("conditions")) {
        if (!conds.empty()) conds += " AND ";
        conds += jc.contains("name") ? jc["name"].get<std::string>()
                                     : "f" + std::to_string(jc["feature"].get<std::size_t>());
        if (jc.contains("bins"))
          conds += " in bins [" + std::to_string(jc["bins"][0].get<int>()) + ", " +
                   std::to_string(jc["bins"][1].get<int>()) + "]";
        else
          conds += " in categories " + jc["categories"].dump();
      }
      const std::string label = agg->record.contains("label")
                                    ? agg->record["label"].get<std::string>()
                                    : std::to_string(agg->rule.target_class);
      rule_rows.push_back({s.dataset, s.strategy, label, std::to_string(agg->rule.dimension()),
                           conds, std::to_string(agg->splits.size()),
                           fmt(static_cast<double>(agg->splits.size()) / static_cast<double>(s.ok)),
                           fmt(agg->z_sum / static_cast<double>(agg->count))});
    }
  }
  write_table("rule_report",
              {"dataset", "strategy", "class", "dimension", "conditions", "splits", "frequency",
               "mean_z"},
              rule_rows);
  return written;
}

}  // namespace rulemine::eval
