// rulemine command-line front end.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rulemine/alt/assoc_rules.hpp"
#include "rulemine/alt/tree_rules.hpp"
#include "rulemine/data/csv.hpp"
#include "rulemine/data/fetch.hpp"
#include "rulemine/data/imputer.hpp"
#include "rulemine/data/quantizer.hpp"
#include "rulemine/data/synthetic.hpp"
#include "rulemine/error.hpp"
#include "rulemine/eval/benchmark.hpp"
#include "rulemine/eval/metrics.hpp"
#include "rulemine/features/local_features.hpp"
#include "rulemine/learn/class_weights.hpp"
#include "rulemine/learn/model.hpp"
#include "rulemine/mining/miner.hpp"
#include "rulemine/mining/rule_io.hpp"

#ifndef RULEMINE_DEFAULT_DATA_DIR
#define RULEMINE_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rulemine;

namespace {

enum Exit { kOk = 0, kConfig = 2, kData = 3, kInvariant = 4 };

fs::path default_data_dir() { return data::cache_dir_from_env(RULEMINE_DEFAULT_DATA_DIR); }

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  return in;
}

// Imputer, bins and distance weights fitted alongside a rule set; transform
// needs them to encode new data exactly like the mining data.
json state_to_json(const data::FeatureSchema& schema, const data::Imputer& imp,
                   const data::BinMap& bins, const features::DeltaWeights& w) {
  json jb = json::array();
  for (const auto& fb : bins.features()) {
    if (fb.kind == data::FeatureKind::Continuous)
      jb.push_back({{"edges", fb.edges}});
    else
      jb.push_back({{"arity", fb.arity}});
  }
  json ranges = json::array();
  for (const auto& r : w.ranges) ranges.push_back({r.min, r.max});
  return {{"format", "rulemine.state"},   {"version", 1},
          {"schema", schema.to_text()},   {"fill", imp.fill_values()},
          {"bins", jb},                   {"frequency", w.feature_frequency},
          {"ranges", ranges}};
}

struct State {
  data::FeatureSchema schema;
  data::Imputer imputer;
  data::BinMap bins;
  features::DeltaWeights weights;
};

State state_from_json(const json& j) {
  try {
    if (j.value("format", "") != "rulemine.state" || j.value("version", 0) != 1)
      throw DataError("not a rulemine state file");
    State s;
    s.schema = data::FeatureSchema::parse(j.at("schema").get<std::string>());
    s.imputer = data::Imputer::from_fill_values(j.at("fill").get<std::vector<double>>());
    std::vector<data::FeatureBins> fbs;
    for (std::size_t f = 0; f < j.at("bins").size(); ++f) {
      const auto& jb = j["bins"][f];
      data::FeatureBins fb;
      if (jb.contains("edges")) {
        fb.kind = data::FeatureKind::Continuous;
        fb.edges = jb["edges"].get<std::vector<double>>();
      } else {
        fb.kind = data::FeatureKind::Categorical;
        fb.arity = jb.at("arity").get<std::size_t>();
      }
      fbs.push_back(std::move(fb));
    }
    s.bins = data::BinMap(std::move(fbs));
    s.weights.feature_frequency = j.at("frequency").get<std::vector<std::vector<double>>>();
    for (const auto& r : j.at("ranges"))
      s.weights.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    if (s.bins.n_features() != s.schema.n_features())
      throw DataError("state file: bin count does not match the schema");
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed state file: ") + e.what());
  }
}

data::Dataset load_named(const std::string& csv, const std::string& schema,
                         const std::string& missing) {
  return data::load_csv(csv, data::FeatureSchema::load(schema), missing);
}

std::string iso_time() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised rule mining, rule-based local features and interpretable classifiers"};
  app.require_subcommand(1);
  std::string log_path = "rulemine_runs.jsonl";
  app.add_option("--log", log_path, "Append a JSON line per run to this file ('' disables)");

  std::vector<std::string> outputs;
  std::function<void()> action;

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download or copy datasets listed in a manifest");
  std::string manifest = (fs::path(RULEMINE_DEFAULT_DATA_DIR) / "manifest.txt").string();
  std::string cache_dir;
  fetch->add_option("--manifest", manifest, "Manifest file (name url sha256 filename)");
  fetch->add_option("--cache", cache_dir, "Cache directory (default: $RULEMINE_CACHE_DIR or the data directory)");
  fetch->callback([&] {
    action = [&] {
      const fs::path cache = cache_dir.empty() ? default_data_dir() : fs::path(cache_dir);
      for (const auto& r : data::fetch_datasets(manifest, cache)) {
        std::cout << r.name << ' ' << (r.status == data::FetchStatus::Cached ? "cached" : "downloaded")
                  << ' ' << r.path.string() << '\n';
        outputs.push_back(r.path.string());
      }
    };
  });

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the synthetic three-class dataset");
  std::size_t synth_n = 500;
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--n", synth_n, "Sample count")->check(CLI::PositiveNumber);
  synth->add_option("--noise", synth_noise, "Relabeling probability in [0, 1)");
  synth->add_option("--seed", synth_seed, "Seed")->required();
  synth->add_option("--out", synth_out, "Output CSV (schema written next to it)")->required();
  synth->callback([&] {
    action = [&] {
      if (!(synth_noise >= 0 && synth_noise < 1)) throw ConfigError("--noise must lie in [0, 1)");
      auto ds = data::generate_synthetic(synth_n, synth_noise, synth_seed);
      auto out = open_out(synth_out);
      data::write_csv(ds, out);
      fs::path schema_path = fs::path(synth_out).replace_extension(".schema");
      open_out(schema_path) << ds.schema().to_text();
      outputs = {synth_out, schema_path.string()};
    };
  });

  // mine
  auto* mine = app.add_subcommand("mine", "Mine rules from a dataset");
  std::string mine_data, mine_schema, mine_out, mine_method = "rulemine", mine_config,
                                               missing_token = "?";
  std::string mine_state;
  std::size_t mine_bins = 10, mine_dim = 1;
  double mine_zmin = 1.96;
  std::string mine_zvariant = "as-printed", mine_frequency = "per-class";
  mine->add_option("--data", mine_data, "Dataset CSV")->required();
  mine->add_option("--schema", mine_schema, "Schema file (default: CSV path with .schema)");
  mine->add_option("--out", mine_out, "Rules file (JSON lines)")->required();
  mine->add_option("--state", mine_state, "Fitted preprocessing state (default: <out>.state.json)");
  mine->add_option("--config", mine_config, "Benchmark config supplying bins, z_min and variants");
  mine->add_option("--method", mine_method, "rulemine | tree | assoc")
      ->check(CLI::IsMember({"rulemine", "tree", "assoc"}));
  mine->add_option("--bins", mine_bins, "Quantile bins per continuous feature");
  mine->add_option("--dimension", mine_dim, "Maximum rule dimension (1 or 2)");
  mine->add_option("--z-min", mine_zmin, "Minimum z-score");
  mine->add_option("--z-variant", mine_zvariant, "as-printed | standard")
      ->check(CLI::IsMember({"as-printed", "standard"}));
  mine->add_option("--frequency", mine_frequency, "per-class | global")
      ->check(CLI::IsMember({"per-class", "global"}));
  mine->add_option("--missing", missing_token, "Missing-value token");
  mine->callback([&] {
    action = [&] {
      eval::PipelineConfig pc;
      pc.n_bins = mine_bins;
      pc.z_min = mine_zmin;
      pc.z_variant = mine_zvariant == "standard" ? mining::ZVariant::Standard : mining::ZVariant::AsPrinted;
      pc.frequency = mine_frequency == "global" ? features::FrequencyScope::Global
                                                : features::FrequencyScope::PerClass;
      if (!mine_config.empty()) pc = eval::load_config(mine_config, default_data_dir()).pipeline;
      const std::string schema_path =
          mine_schema.empty() ? fs::path(mine_data).replace_extension(".schema").string() : mine_schema;
      auto ds = load_named(mine_data, schema_path, missing_token);
      auto imp = data::Imputer::fit(ds);
      auto filled = imp.apply(ds);
      auto bins = data::BinMap::fit(filled, pc.n_bins);
      auto binned = bins.apply(filled);
      mining::RuleSet rules;
      if (mine_method == "rulemine") {
        mining::MiningConfig mc;
        mc.max_dimension = mine_dim;
        mc.z_min = pc.z_min;
        mc.n_bins = pc.n_bins;
        mc.z_variant = pc.z_variant;
        rules = mining::mine(binned, mc);
      } else if (mine_method == "tree") {
        alt::TreeRuleConfig tc;
        tc.n_bins = pc.n_bins;
        tc.z_variant = pc.z_variant;
        rules = alt::tree_rules(binned, tc);
      } else {
        alt::AssocRuleConfig ac;
        ac.z_min = pc.z_min;
        ac.n_bins = pc.n_bins;
        ac.z_variant = pc.z_variant;
        ac.max_items = pc.assoc_max_items;
        ac.min_support = pc.assoc_min_support;
        rules = alt::assoc_rules(binned, ac);
      }
      auto weights = features::DeltaWeights::fit(filled, rules, pc.frequency);
      auto out = open_out(mine_out);
      mining::write_rules(rules, out, &ds.schema());
      const std::string state_path = mine_state.empty() ? mine_out + ".state.json" : mine_state;
      open_out(state_path) << state_to_json(ds.schema(), imp, bins, weights).dump() << '\n';
      std::cout << rules.size() << " rules";
      for (std::size_t c = 0; c < rules.n_classes(); ++c)
        std::cout << (c ? ", " : " (") << ds.schema().target().labels[c] << ": "
                  << rules.by_class[c].size();
      std::cout << ")\n";
      outputs = {mine_out, state_path};
    };
  });

  // transform
  auto* transform = app.add_subcommand("transform", "Encode a dataset with mined rules");
  std::string tf_data, tf_rules, tf_state, tf_out, tf_encoding = "distance";
  transform->add_option("--data", tf_data, "Dataset CSV (schema from the state file)")->required();
  transform->add_option("--rules", tf_rules, "Rules file")->required();
  transform->add_option("--state", tf_state, "State file (default: <rules>.state.json)");
  transform->add_option("--encoding", tf_encoding, "distance | binary")
      ->check(CLI::IsMember({"distance", "binary"}));
  transform->add_option("--out", tf_out, "Local feature CSV")->required();
  transform->add_option("--missing", missing_token, "Missing-value token");
  transform->callback([&] {
    action = [&] {
      json sj;
      {
        auto in = open_in(tf_state.empty() ? tf_rules + ".state.json" : tf_state);
        try {
          in >> sj;
        } catch (const json::exception& e) {
          throw DataError(std::string("malformed state file: ") + e.what());
        }
      }
      State st = state_from_json(sj);
      auto rin = open_in(tf_rules);
      auto rules = mining::read_rules(rin);
      if (rules.n_classes() != st.schema.n_classes())
        throw DataError("rules and state disagree on the class count");
      auto ds = data::load_csv(tf_data, st.schema, missing_token);
      auto filled = st.imputer.apply(ds);
      auto enc = tf_encoding == "binary" ? features::Encoding::Binary : features::Encoding::Distance;
      auto lf = features::transform(filled, rules, st.bins, st.weights, enc);
      auto out = open_out(tf_out);
      features::write_local_features(lf, st.schema, out, ds.labels());
      outputs = {tf_out};
    };
  });

  // train
  auto* train = app.add_subcommand("train", "Train a classifier on a numeric feature CSV");
  std::string tr_features, tr_model = "L2LR", tr_out, tr_label_col, tr_loss = "squared-hinge";
  double tr_C = 1.0, tr_gamma = 0.0;
  std::size_t tr_trees = 100, tr_min_leaf = 1;
  std::uint64_t tr_seed = 0;
  train->add_option("--features", tr_features, "CSV: numeric columns plus a label column ('#' lines ignored)")->required();
  train->add_option("--label-column", tr_label_col, "Label column name (default: last column)");
  train->add_option("--model", tr_model, "L1LR | L2LR | SVM-lin | SVM-rbf | RF | CART")
      ->check(CLI::IsMember({"L1LR", "L2LR", "SVM-lin", "SVM-rbf", "RF", "CART"}));
  train->add_option("--C", tr_C, "Inverse regularization strength");
  train->add_option("--loss", tr_loss, "Linear SVM loss: hinge | squared-hinge")
      ->check(CLI::IsMember({"hinge", "squared-hinge"}));
  train->add_option("--gamma", tr_gamma, "RBF bandwidth (default: 1 / (p * variance))");
  train->add_option("--trees", tr_trees, "Forest size");
  train->add_option("--min-leaf", tr_min_leaf, "Tree minimum leaf size");
  train->add_option("--seed", tr_seed, "Seed");
  train->add_option("--out", tr_out, "Model file (JSON)")->required();
  train->callback([&] {
    action = [&] {
      auto in = open_in(tr_features);
      std::string line;
      std::vector<std::string> header;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) header.push_back(f);
        break;
      }
      if (header.size() < 2) throw DataError("feature CSV needs a header with at least two columns");
      std::size_t label_col = header.size() - 1;
      if (!tr_label_col.empty()) {
        auto it = std::find(header.begin(), header.end(), tr_label_col);
        if (it == header.end()) throw DataError("no column named '" + tr_label_col + "'");
        label_col = static_cast<std::size_t>(it - header.begin());
      }
      std::vector<std::vector<double>> rows;
      std::vector<std::string> raw_labels;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string v; std::getline(ss, v, ',');) f.push_back(v);
        if (f.size() != header.size()) throw DataError("feature CSV row " + std::to_string(lineno) + ": wrong field count");
        std::vector<double> r;
        for (std::size_t j = 0; j < f.size(); ++j) {
          if (j == label_col) continue;
          std::size_t used = 0;
          double v = 0;
          try {
            v = std::stod(f[j], &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != f[j].size() || !std::isfinite(v))
            throw DataError("feature CSV row " + std::to_string(lineno) + ": non-numeric value '" + f[j] + "'");
          r.push_back(v);
        }
        rows.push_back(std::move(r));
        raw_labels.push_back(f[label_col]);
      }
      if (rows.empty()) throw DataError("feature CSV has no rows");
      std::vector<std::string> classes(raw_labels.begin(), raw_labels.end());
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      std::vector<int> y;
      for (const auto& l : raw_labels)
        y.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin()));
      Matrix X(rows.size(), header.size() - 1);
      for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), X.row(i).begin());

      learn::Model model;
      std::vector<learn::ColumnKind> kinds(X.cols(), learn::ColumnKind::Ordinal);
      if (tr_model == "CART") {
        learn::TreeParams tp;
        tp.min_leaf = tr_min_leaf;
        model = learn::train_cart(X, y, classes.size(), kinds, tp,
                                  learn::balanced_sample_weights(y, classes.size()), tr_seed);
      } else {
        eval::PipelineConfig pc;
        pc.gamma = tr_gamma;
        pc.svm_loss = tr_loss == "hinge" ? learn::SvmLoss::Hinge : learn::SvmLoss::SquaredHinge;
        pc.forest_min_leaf = tr_min_leaf;
        auto strat = eval::Strategy::parse(tr_model);
        eval::HyperParams hp{tr_C, tr_trees};
        model = eval::train_classifier(strat.classifier, hp, pc, X, y, classes.size(), kinds, tr_seed);
      }
      auto out = open_out(tr_out);
      learn::save_model(model, out);
      const double f1 = eval::weighted_f1(y, learn::predict(model, X), classes.size());
      std::cout << "classes:";
      for (const auto& c : classes) std::cout << ' ' << c;
      std::cout << "\ntraining weighted F1: " << std::fixed << std::setprecision(2) << f1
                << "\ncomplexity: " << eval::model_complexity(model) << '\n';
      outputs = {tr_out};
    };
  });

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Run the evaluation protocol from a config file");
  std::string bench_config, out_dir = "rulemine_out", format = "csv";
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = 0;
  bench->add_option("--config", bench_config, "Config file")->required();
  bench->add_option("--seed", seed_override, "Override the config's master seed");
  bench->add_option("--out-dir", out_dir, "Output directory");
  bench->add_option("--jobs", jobs, "Parallel cells (default: config 'jobs')");
  bench->add_option("--format", format, "csv | records")->check(CLI::IsMember({"csv", "records"}));
  bench->callback([&] {
    action = [&] {
      auto config = eval::load_config(bench_config, default_data_dir());
      if (seed_override) config.seed = *seed_override;
      if (jobs > 0) config.jobs = jobs;
      std::size_t done = 0;
      const std::size_t total = config.datasets.size() * config.strategies.size() * config.n_splits;
      auto result = eval::run_benchmark(config, [&](const eval::CellResult& c) {
        ++done;
        std::cerr << '[' << done << '/' << total << "] " << c.dataset << ' ' << c.strategy
                  << " split " << c.split << ": ";
        if (c.ok)
          std::cerr << "F1 " << std::fixed << std::setprecision(1) << c.f1 << " (" << c.best << ")\n";
        else
          std::cerr << "error: " << c.message << '\n';
      });
      eval::write_benchmark(result, config, out_dir,
                            format == "csv" ? eval::ReportFormat::Csv : eval::ReportFormat::Records);
      std::size_t errors = 0;
      for (const auto& c : result.cells) errors += !c.ok;
      std::cout << result.cells.size() << " cells, " << errors << " failed; results in " << out_dir
                << '\n';
      outputs = {out_dir};
    };
  });

  // report
  auto* report = app.add_subcommand("report", "Rebuild report tables from benchmark output");
  report->add_option("--out-dir", out_dir, "Benchmark output directory")->required();
  report->add_option("--format", format, "csv | records")->check(CLI::IsMember({"csv", "records"}));
  report->callback([&] {
    action = [&] {
      for (const auto& p : eval::write_report(out_dir, format == "csv" ? eval::ReportFormat::Csv
                                                                        : eval::ReportFormat::Records)) {
        std::cout << p.string() << '\n';
        outputs.push_back(p.string());
      }
    };
  });

  int status = kOk;
  std::string message;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  try {
    action();
  } catch (const ConfigError& e) {
    status = kConfig;
    message = e.what();
  } catch (const DataError& e) {
    status = kData;
    message = e.what();
  } catch (const InvariantError& e) {
    status = kInvariant;
    message = e.what();
  } catch (const std::exception& e) {
    status = kInvariant;
    message = e.what();
  }
  if (status != kOk) std::cerr << "rulemine: " << message << '\n';

  if (!log_path.empty()) {
    std::vector<std::string> args(argv + 1, argv + argc);
    json rec = {{"time", iso_time()},
                {"command", app.get_subcommands().front()->get_name()},
                {"args", args},
                {"status", status},
                {"outputs", outputs}};
    if (!message.empty()) rec["error"] = message;
    std::ofstream log(log_path, std::ios::app);
    if (log) log << rec.dump() << '\n';
  }
  return status;
}
