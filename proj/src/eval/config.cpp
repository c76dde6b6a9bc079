#include "rulemine/eval/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "rulemine/data/csv.hpp"
#include "rulemine/data/synthetic.hpp"
#include "rulemine/error.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::eval {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

BenchmarkConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                             const std::filesystem::path& default_data_dir) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("key '" + key + "' given twice");
  }

  BenchmarkConfig c;
  auto& p = c.pipeline;
  std::filesystem::path data_dir = default_data_dir;
  std::map<std::string, DatasetSpec> custom;
  std::vector<std::string> dataset_names;
  bool have_seed = false;

  for (const auto& [key, value] : kv) {
    if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
      have_seed = true;
    } else if (key == "datasets") {
      dataset_names = split_list(value);
    } else if (key == "strategies") {
      c.strategies = split_list(value);
      for (const auto& s : c.strategies) {
        try {
          Strategy::parse(s);
        } catch (const ConfigError& e) {
          throw ConfigError("key 'strategies': " + std::string(e.what()));
        }
      }
    } else if (key == "data_dir") {
      data_dir = resolve(base_dir, value);
    } else if (key.rfind("dataset.", 0) == 0) {
      auto parts = split_list(value);
      if (parts.size() != 2) throw ConfigError("key '" + key + "': expected 'csv path, schema path'");
      DatasetSpec spec;
      spec.name = key.substr(8);
      if (spec.name.empty()) throw ConfigError("key '" + key + "': empty dataset name");
      spec.csv = resolve(base_dir, parts[0]);
      spec.schema = resolve(base_dir, parts[1]);
      custom[spec.name] = spec;
    } else if (key == "c_grid") {
      c.c_grid.clear();
      for (const auto& v : split_list(value)) c.c_grid.push_back(parse_number<double>(key, v));
      for (double v : c.c_grid)
        if (!(v > 0)) throw ConfigError("key 'c_grid': values must be positive");
    } else if (key == "tree_grid") {
      c.tree_grid.clear();
      for (const auto& v : split_list(value)) c.tree_grid.push_back(parse_number<std::size_t>(key, v));
      for (auto v : c.tree_grid)
        if (v == 0) throw ConfigError("key 'tree_grid': values must be positive");
    } else if (key == "splits") {
      c.n_splits = parse_number<std::size_t>(key, value);
    } else if (key == "test_frac") {
      c.test_frac = parse_number<double>(key, value);
    } else if (key == "folds") {
      c.k_folds = parse_number<std::size_t>(key, value);
    } else if (key == "bins") {
      p.n_bins = parse_number<std::size_t>(key, value);
    } else if (key == "z_min") {
      p.z_min = parse_number<double>(key, value);
    } else if (key == "z_variant") {
      if (value == "as-printed")
        p.z_variant = mining::ZVariant::AsPrinted;
      else if (value == "standard")
        p.z_variant = mining::ZVariant::Standard;
      else
        throw ConfigError("key 'z_variant': expected as-printed or standard");
    } else if (key == "encoding") {
      if (value == "distance")
        p.encoding = features::Encoding::Distance;
      else if (value == "binary")
        p.encoding = features::Encoding::Binary;
      else
        throw ConfigError("key 'encoding': expected distance or binary");
    } else if (key == "frequency") {
      if (value == "per-class")
        p.frequency = features::FrequencyScope::PerClass;
      else if (value == "global")
        p.frequency = features::FrequencyScope::Global;
      else
        throw ConfigError("key 'frequency': expected per-class or global");
    } else if (key == "gamma") {
      p.gamma = value == "auto" ? 0.0 : parse_number<double>(key, value);
      if (p.gamma < 0) throw ConfigError("key 'gamma': must be positive or auto");
    } else if (key == "svm_loss") {
      if (value == "hinge")
        p.svm_loss = learn::SvmLoss::Hinge;
      else if (value == "squared-hinge")
        p.svm_loss = learn::SvmLoss::SquaredHinge;
      else
        throw ConfigError("key 'svm_loss': expected hinge or squared-hinge, got '" + value + "'");
    } else if (key == "max_iterations") {
      p.budget.max_iterations = parse_number<std::size_t>(key, value);
    } else if (key == "tolerance") {
      p.budget.tolerance = parse_number<double>(key, value);
    } else if (key == "forest_min_leaf") {
      p.forest_min_leaf = parse_number<std::size_t>(key, value);
    } else if (key == "forest_bootstrap") {
      p.forest_bootstrap = parse_bool(key, value);
    } else if (key == "assoc_max_items") {
      p.assoc_max_items = parse_number<std::size_t>(key, value);
    } else if (key == "assoc_min_support") {
      p.assoc_min_support = parse_number<std::size_t>(key, value);
    } else if (key == "remine_per_fold") {
      c.remine_per_fold = parse_bool(key, value);
    } else if (key == "synthetic_n") {
      c.synthetic_n = parse_number<std::size_t>(key, value);
    } else if (key == "synthetic_noise") {
      c.synthetic_noise = parse_number<double>(key, value);
    } else if (key == "missing_token") {
      c.missing_token = value;
    } else if (key == "jobs") {
      c.jobs = parse_number<unsigned>(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (!have_seed) throw ConfigError("key 'seed' is required");
  if (dataset_names.empty()) throw ConfigError("key 'datasets' lists no dataset");
  if (c.strategies.empty()) throw ConfigError("key 'strategies' lists no strategy");
  if (c.c_grid.empty()) throw ConfigError("key 'c_grid' is empty");
  if (c.tree_grid.empty()) throw ConfigError("key 'tree_grid' is empty");
  if (c.n_splits == 0) throw ConfigError("key 'splits' must be positive");
  if (!(c.test_frac > 0 && c.test_frac < 1)) throw ConfigError("key 'test_frac' must lie in (0, 1)");
  if (c.k_folds < 2) throw ConfigError("key 'folds' must be at least 2");
  if (p.n_bins == 0) throw ConfigError("key 'bins' must be positive");
  if (!(p.z_min > 0)) throw ConfigError("key 'z_min' must be positive");
  if (p.budget.max_iterations == 0) throw ConfigError("key 'max_iterations' must be positive");
  if (!(p.budget.tolerance > 0)) throw ConfigError("key 'tolerance' must be positive");
  if (p.forest_min_leaf == 0) throw ConfigError("key 'forest_min_leaf' must be positive");
  if (p.assoc_max_items == 0) throw ConfigError("key 'assoc_max_items' must be positive");
  if (c.synthetic_n == 0) throw ConfigError("key 'synthetic_n' must be positive");
  if (!(c.synthetic_noise >= 0 && c.synthetic_noise < 1))
    throw ConfigError("key 'synthetic_noise' must lie in [0, 1)");
  if (c.jobs == 0) c.jobs = 1;

  for (const auto& name : dataset_names) {
    if (std::count(dataset_names.begin(), dataset_names.end(), name) > 1)
      throw ConfigError("key 'datasets': '" + name + "' listed twice");
    if (auto it = custom.find(name); it != custom.end()) {
      c.datasets.push_back(it->second);
      continue;
    }
    DatasetSpec spec;
    spec.name = name;
    if (name == "synthetic" || name == "synthetic-noisy") {
      spec.kind = DatasetSpec::Kind::Synthetic;
      spec.noise = name == "synthetic" ? 0.0 : c.synthetic_noise;
    } else if (std::find(kBuiltinDatasets.begin(), kBuiltinDatasets.end(), name) !=
               kBuiltinDatasets.end()) {
      spec.csv = data_dir / (name + ".csv");
      spec.schema = data_dir / (name + ".schema");
    } else {
      throw ConfigError("key 'datasets': unknown dataset '" + name + "'");
    }
    c.datasets.push_back(spec);
  }
  for (const auto& [name, spec] : custom)
    if (std::find(dataset_names.begin(), dataset_names.end(), name) == dataset_names.end())
      throw ConfigError("key 'dataset." + name + "': dataset not listed in 'datasets'");
  return c;
}

BenchmarkConfig load_config(const std::filesystem::path& path,
                            const std::filesystem::path& default_data_dir) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), default_data_dir);
}

std::string BenchmarkConfig::to_text() const {
  std::ostringstream out;
  auto list = [&](const auto& values, auto fmt) {
    std::string s;
    for (const auto& v : values) s += (s.empty() ? "" : ", ") + fmt(v);
    return s;
  };
  auto str = [](const std::string& s) { return s; };
  auto dbl = [](double v) { return data::format_double(v); };
  auto num = [](std::size_t v) { return std::to_string(v); };
  const auto& p = pipeline;
  out << "seed = " << seed << '\n';
  out << "datasets = "
      << list(datasets, [](const DatasetSpec& d) { return d.name; }) << '\n';
  out << "strategies = " << list(strategies, str) << '\n';
  out << "c_grid = " << list(c_grid, dbl) << '\n';
  out << "tree_grid = " << list(tree_grid, num) << '\n';
  out << "splits = " << n_splits << '\n';
  out << "test_frac = " << dbl(test_frac) << '\n';
  out << "folds = " << k_folds << '\n';
  out << "remine_per_fold = " << (remine_per_fold ? "true" : "false") << '\n';
  out << "bins = " << p.n_bins << '\n';
  out << "z_min = " << dbl(p.z_min) << '\n';
  out << "z_variant = " << (p.z_variant == mining::ZVariant::AsPrinted ? "as-printed" : "standard")
      << '\n';
  out << "encoding = " << (p.encoding == features::Encoding::Binary ? "binary" : "distance")
      << '\n';
  out << "frequency = "
      << (p.frequency == features::FrequencyScope::Global ? "global" : "per-class") << '\n';
  out << "svm_loss = " << (p.svm_loss == learn::SvmLoss::Hinge ? "hinge" : "squared-hinge")
      << '\n';
  out << "gamma = " << (p.gamma > 0 ? dbl(p.gamma) : std::string("auto")) << '\n';
  out << "max_iterations = " << p.budget.max_iterations << '\n';
  out << "tolerance = " << dbl(p.budget.tolerance) << '\n';
  out << "forest_min_leaf = " << p.forest_min_leaf << '\n';
  out << "forest_bootstrap = " << (p.forest_bootstrap ? "true" : "false") << '\n';
  out << "assoc_max_items = " << p.assoc_max_items << '\n';
  out << "assoc_min_support = " << p.assoc_min_support << '\n';
  out << "synthetic_n = " << synthetic_n << '\n';
  out << "synthetic_noise = " << dbl(synthetic_noise) << '\n';
  out << "missing_token = " << missing_token << '\n';
  return out.str();
}

data::Dataset load_dataset(const DatasetSpec& spec, const BenchmarkConfig& config) {
  if (spec.kind == DatasetSpec::Kind::Synthetic)
    return data::generate_synthetic(config.synthetic_n, spec.noise,
                                    derive_seed(config.seed, "synthetic/" + spec.name));
  if (!std::filesystem::exists(spec.csv))
    throw DataError("dataset '" + spec.name + "': missing file " + spec.csv.string() +
                    " (run 'rulemine fetch' first)");
  const auto schema = data::FeatureSchema::load(spec.schema);
  return data::load_csv(spec.csv, schema, config.missing_token);
}

}  // namespace rulemine::eval
