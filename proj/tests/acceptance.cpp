// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "oracle_miner.hpp"
#include "rulemine/data/imputer.hpp"
#include "rulemine/data/quantizer.hpp"
#include "rulemine/eval/benchmark.hpp"
#include "rulemine/eval/config.hpp"
#include "rulemine/eval/metrics.hpp"
#include "rulemine/eval/splits.hpp"
#include "rulemine/features/local_features.hpp"
#include "rulemine/learn/kernel_svm.hpp"
#include "rulemine/learn/linear.hpp"
#include "rulemine/learn/model.hpp"
#include "rulemine/mining/miner.hpp"
#include "test_util.hpp"

using namespace rulemine;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 2017;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

struct Benchmark {
  eval::BenchmarkConfig config;
  eval::BenchmarkResult result;
  std::map<std::string, std::string> files;
};

double mean_f1(const eval::BenchmarkResult& r, const std::string& ds, const std::string& strategy,
               std::size_t* n_ok = nullptr) {
  std::vector<double> v;
  for (const auto& c : r.cells)
    if (c.dataset == ds && c.strategy == strategy && c.ok) v.push_back(c.f1);
  if (n_ok) *n_ok = v.size();
  return v.empty() ? std::nan("") : eval::mean_std(v).mean;
}

std::vector<const eval::CellResult*> cells_of(const eval::BenchmarkResult& r, const std::string& ds,
                                              const std::string& strategy) {
  std::vector<const eval::CellResult*> out;
  for (const auto& c : r.cells)
    if (c.dataset == ds && c.strategy == strategy) out.push_back(&c);
  return out;
}

Outcome within(const Benchmark& b, const std::string& ds, const std::string& strategy, double target,
               double tol) {
  Outcome o;
  std::size_t n = 0;
  double m = mean_f1(b.result, ds, strategy, &n);
  o.require(n == b.config.n_splits, std::to_string(n) + " cells ok");
  o.require(std::abs(m - target) <= tol,
            ds + " " + strategy + " mean F1 " + fmt(m) + " vs " + fmt(target, 1) + " +- " + fmt(tol, 1));
  return o;
}

// ---- criteria ---------------------------------------------------------------

Outcome criterion3(const Benchmark& b) {
  Outcome o;
  double rm = mean_f1(b.result, "balance-scale", "RM1D-SVM-lin");
  double rf = mean_f1(b.result, "balance-scale", "RF");
  o.require(rm >= 92.0, "RM1D-SVM-lin " + fmt(rm) + " >= 92");
  o.require(rm - rf >= 15.0, "RF " + fmt(rf) + ", gap " + fmt(rm - rf) + " >= 15");
  return o;
}

Outcome criterion4(const Benchmark& b) {
  Outcome o;
  double clean = mean_f1(b.result, "synthetic", "RM1D-SVM-rbf");
  double noisy = mean_f1(b.result, "synthetic-noisy", "RM1D-SVM-rbf");
  o.require(clean >= 92.0, "noiseless " + fmt(clean) + " >= 92");
  o.require(std::abs(noisy - 74.2) <= 6.0, "noisy " + fmt(noisy) + " vs 74.2 +- 6");
  return o;
}

Outcome criterion5(const Benchmark& b) {
  Outcome o;
  // WDBC: rules selected in every split, per class and feature.
  auto cells = cells_of(b.result, "wdbc", "RM1D-L2LR");
  const data::FeatureSchema* schema = nullptr;
  for (const auto& d : b.result.datasets)
    if (d.name == "wdbc") schema = &d.schema;
  if (!schema || cells.empty()) {
    o.require(false, "wdbc cells missing");
    return o;
  }
  const auto& labels = schema->target().labels;
  const int benign = static_cast<int>(std::find(labels.begin(), labels.end(), "benign") - labels.begin());
  const int malign = static_cast<int>(std::find(labels.begin(), labels.end(), "malignant") - labels.begin());
  std::map<std::tuple<int, std::size_t, int, int>, std::size_t> seen;
  for (const auto* c : cells)
    for (const auto& r : c->rules.flatten())
      if (r.dimension() == 1 && r.conditions[0].is_interval())
        ++seen[{r.target_class, r.conditions[0].feature, r.conditions[0].interval().lo,
                r.conditions[0].interval().hi}];
  std::map<std::pair<int, std::size_t>, std::vector<mining::Interval>> frequent;
  for (const auto& [k, count] : seen)
    if (count == cells.size())
      frequent[{std::get<0>(k), std::get<1>(k)}].push_back({std::get<2>(k), std::get<3>(k)});
  std::size_t compared = 0, ordered = 0;
  std::string bad;
  for (std::size_t f = 0; f < schema->n_features(); ++f) {
    auto bi = frequent.find({benign, f}), mi = frequent.find({malign, f});
    if (bi == frequent.end() || mi == frequent.end()) continue;
    ++compared;
    bool ok = true;
    for (const auto& a : bi->second)
      for (const auto& m : mi->second) ok = ok && a.hi < m.lo;
    ordered += ok;
    if (!ok) bad += (bad.empty() ? "" : ",") + schema->feature(f).name;
  }
  o.require(compared > 0 && ordered == compared,
            "wdbc: " + std::to_string(ordered) + "/" + std::to_string(compared) +
                " features with disjoint, benign-low rules" + (bad.empty() ? "" : " (fails: " + bad + ")"));

  // Noiseless synthetic: x3 = 1 and a high x1 interval among class-2 rules of every split.
  auto syn = cells_of(b.result, "synthetic", "RM1D-SVM-rbf");
  std::size_t both = 0;
  for (const auto* c : syn) {
    bool x3 = false, x1 = false;
    if (c->rules.n_classes() < 3) continue;
    for (const auto& r : c->rules.by_class[2]) {
      if (r.dimension() != 1) continue;
      const auto& cond = r.conditions[0];
      if (cond.feature == 2 && !cond.is_interval() && cond.categories().mask == 0b10) x3 = true;
      if (cond.feature == 0 && cond.is_interval() && cond.interval().lo >= 5 && cond.interval().hi == 9)
        x1 = true;
    }
    both += x3 && x1;
  }
  o.require(!syn.empty() && both == syn.size(),
            "synthetic: x3=1 and high-x1 class-2 rules in " + std::to_string(both) + "/" +
                std::to_string(syn.size()) + " splits");
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(derive_seed(kSeed, "acceptance-oracle"));
  std::size_t agree = 0, rules = 0;
  for (int rep = 0; rep < 50; ++rep) {
    auto d = test::random_instance(rng);
    mining::MiningConfig cfg;
    cfg.max_dimension = 1 + rng.below(2);
    cfg.z_min = rep % 2 ? 0.5 : 1.96;
    cfg.n_bins = 4;
    auto want = test::reference_mine(d, cfg.max_dimension, cfg.z_min, 4.0);
    rules += want.size();
    agree += test::same_rules(mining::mine(d, cfg), want);
  }
  o.require(agree == 50, std::to_string(agree) + "/50 instances equal (" + std::to_string(rules) + " rules)");
  bool counts = true;
  for (std::size_t k = 1; k <= 6; ++k) {
    counts = counts && mining::enumerate_candidates_1d(0, data::FeatureKind::Continuous, k).size() == k * (k + 1) / 2;
    if (k >= 2)
      counts = counts && mining::enumerate_candidates_1d(0, data::FeatureKind::Categorical, k).size() ==
                             (std::size_t{1} << k) - 1;
  }
  o.require(counts, "candidate counts k(k+1)/2 and 2^k-1");
  return o;
}

Outcome criterion7() {
  Outcome o;
  double z = mining::z_score(100, 0.5, 0.3);
  o.require(std::abs(z - 3.381) < 1e-3, "z " + fmt(z, 4));
  std::vector<features::FeatureRange> range = {{0, 10}};
  double delta = features::delta_distance(std::vector<double>{7.5}, std::vector<double>{5.0},
                                          std::vector<double>{1.0}, range, 2.0);
  o.require(std::abs(delta - 1.5) < 1e-9, "delta " + fmt(delta, 10));
  std::vector<int> y(100, 0), pred(100, 0);
  std::fill(y.begin() + 90, y.end(), 1);
  double f1 = eval::weighted_f1(y, pred, 2);
  o.require(std::abs(f1 - 33.3) < 0.1, "majority F1 " + fmt(f1, 3));
  double j = eval::jaccard({{1, 1}, {1, 2}}, {{1, 2}, {1, 3}});
  o.require(j == 1.0 / 3.0, "Jaccard " + fmt(j, 6));
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(derive_seed(kSeed, "acceptance-gradient"));
  double worst = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 5 + rng.below(30), p = 1 + rng.below(6);
    Matrix X(n, p);
    for (auto& v : X.data()) v = rng.uniform() * 4 - 2;
    std::vector<double> t(n), s(n), w(p);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
      s[i] = 0.2 + rng.uniform();
    }
    for (auto& v : w) v = rng.uniform() * 2 - 1;
    const double b = rng.uniform() - 0.5, C = 0.1 + 10 * rng.uniform();
    auto f = [&](std::vector<double> ww, double bb) {
      return learn::logistic_objective(X, t, s, ww, bb, learn::LinearKind::LogisticL2, C);
    };
    double gb = 0;
    auto g = learn::logistic_gradient(X, t, s, w, b, learn::LinearKind::LogisticL2, C, gb);
    g.push_back(gb);
    double diff = 0, norm = 0;
    const double h = 1e-6;
    for (std::size_t j = 0; j <= p; ++j) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < p) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      double num = (f(wp, bp) - f(wm, bm)) / (2 * h);
      diff += (num - g[j]) * (num - g[j]);
      norm += g[j] * g[j];
    }
    worst = std::max(worst, std::sqrt(diff / std::max(norm, 1e-300)));
  }
  o.require(worst < 1e-5, "gradient rel. error " + fmt(worst * 1e6, 3) + "e-6");

  Matrix X(60, 4);
  std::vector<int> y(60);
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t j = 0; j < 4; ++j) X(i, j) = rng.uniform() * 2 - 1;
    y[i] = X(i, 0) + X(i, 1) > 0;
  }
  auto l1 = learn::train_logreg(X, y, 2, learn::LinearKind::LogisticL1, 1e-6, {});
  o.require(std::all_of(l1.weights.data().begin(), l1.weights.data().end(), [](double v) { return v == 0.0; }),
            "L1 at C=1e-6 all zero");

  auto xor_X = test::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  std::vector<int> xor_y = {0, 0, 1, 1};
  auto acc = [&](const learn::Model& m) {
    auto p = learn::predict(m, xor_X);
    double ok = 0;
    for (std::size_t i = 0; i < 4; ++i) ok += p[i] == xor_y[i];
    return ok / 4.0;
  };
  double lin = std::max({acc(learn::train_linear_svm(xor_X, xor_y, 2, 10.0, {}, kSeed)),
                         acc(learn::train_logreg(xor_X, xor_y, 2, learn::LinearKind::LogisticL2, 10.0, {}))});
  double rbf = acc(learn::train_rbf_svm(xor_X, xor_y, 2, 10.0, 1.0, {}));
  o.require(lin <= 0.75, "XOR linear " + fmt(100 * lin, 0) + "%");
  o.require(rbf == 1.0, "XOR rbf " + fmt(100 * rbf, 0) + "%");
  return o;
}

Outcome criterion9(const Benchmark& a, const Benchmark& b) {
  Outcome o;
  // Leakage sentinel: mutate the test labels, everything fitted must stay.
  auto iris = test::load_bundled("iris");
  auto split = eval::stratified_split(iris.labels(), 3, a.config.test_frac, 1, kSeed)[0];
  std::vector<int> mutated(iris.labels().begin(), iris.labels().end());
  for (auto i : split.test) mutated[i] = (mutated[i] + 1) % 3;
  auto iris2 = iris.with_labels(mutated);
  std::size_t same = 0, total = 0;
  for (std::string name : {"RM1D-L2LR", "RM2D-L1LR", "RMDT-SVM-lin", "RMAR-SVM-rbf", "RF"}) {
    eval::FittedPipeline p1, p2;
    auto s = eval::Strategy::parse(name);
    auto c1 = eval::run_cell(iris, split, s, a.config, 7, &p1);
    auto c2 = eval::run_cell(iris2, split, s, a.config, 7, &p2);
    auto X = p1.pre.features(iris);
    ++total;
    same += c1.ok && c2.ok && c1.best == c2.best && c1.grid_scores == c2.grid_scores && c1.rules == c2.rules &&
            p1.pre.bins == p2.pre.bins && learn::decision_values(p1.model, X) == learn::decision_values(p2.model, X);
  }
  o.require(same == total, "leakage sentinel " + std::to_string(same) + "/" + std::to_string(total));

  std::size_t differing = 0;
  for (const auto& [name, text] : a.files) {
    auto it = b.files.find(name);
    differing += it == b.files.end() || it->second != text;
  }
  o.require(a.files.size() == b.files.size() && differing == 0 && !a.files.empty(),
            "two full runs: " + std::to_string(a.files.size()) + " files, " + std::to_string(differing) +
                " differ");

  std::size_t bad = 0, checked = 0;
  for (const auto& spec : a.config.datasets) {
    auto ds = eval::load_dataset(spec, a.config);
    auto counts = ds.class_counts();
    for (const auto& sp : eval::stratified_split(ds.labels(), ds.n_classes(), a.config.test_frac,
                                                 a.config.n_splits, eval::split_seed(a.config.seed, spec.name)))
      for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) continue;
        auto in_test = std::count_if(sp.test.begin(), sp.test.end(),
                                     [&](std::size_t i) { return ds.label(i) == static_cast<int>(c); });
        double want = a.config.test_frac * static_cast<double>(counts[c]);
        ++checked;
        bad += std::abs(static_cast<double>(in_test) - want) > 1.0;
      }
  }
  o.require(bad == 0, "class ratios within 1 sample in " + std::to_string(checked - bad) + "/" +
                          std::to_string(checked) + " (split, class) pairs");
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto iris = test::load_bundled("iris");
  auto imputed = data::Imputer::fit(iris).apply(iris);
  auto bins = data::BinMap::fit(imputed, 10);
  std::size_t f = 0;
  while (f < iris.n_features() && iris.schema().feature(f).name != "sepal_width") ++f;
  if (f == iris.n_features()) {
    o.require(false, "no sepal_width feature");
    return o;
  }
  std::vector<double> values(imputed.column(f).begin(), imputed.column(f).end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // An edge passes when it lies between the observed neighbours of the target.
  auto near = [&](double edge, double target) {
    std::size_t k = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), target) - values.begin());
    double lo = values[k ? k - 1 : 0], hi = values[std::min(k + 1, values.size() - 1)];
    return lo <= edge && edge <= hi;
  };
  const auto& fb = bins.feature(f);
  o.require(near(fb.lower(0), 2.0), "lower edge " + fmt(fb.lower(0), 3) + " vs 2.0");
  o.require(near(fb.upper(0), 2.5), "upper edge " + fmt(fb.upper(0), 3) + " vs 2.5");
  return o;
}

Benchmark run_full(const fs::path& config_path, const fs::path& out_dir) {
  Benchmark b;
  b.config = eval::load_config(config_path, test::data_dir());
  b.config.jobs = std::max(1u, std::thread::hardware_concurrency());
  b.result = eval::run_benchmark(b.config);
  eval::write_benchmark(b.result, b.config, out_dir, eval::ReportFormat::Csv);
  b.files = dir_contents(out_dir);
  return b;
}

}  // namespace

int main() {
  const fs::path config_path = RULEMINE_BENCHMARK_CONFIG;
  test::TempDir tmp;
  auto t0 = std::chrono::steady_clock::now();
  std::printf("running the full benchmark twice (%s)\n", config_path.c_str());
  std::fflush(stdout);
  Benchmark first = run_full(config_path, tmp.path / "run1");
  Benchmark second = run_full(config_path, tmp.path / "run2");
  double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
  std::printf("benchmark runs finished in %.1f min\n", minutes);
  if (first.config.seed != kSeed) std::printf("warning: config seed %llu\n", (unsigned long long)first.config.seed);

  std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, [&] { return within(first, "wdbc", "RM1D-L2LR", 97.0, 3.0); }},
      {2, [&] { return within(first, "iris", "RM1D-SVM-lin", 98.2, 3.0); }},
      {3, [&] { return criterion3(first); }},
      {4, [&] { return criterion4(first); }},
      {5, [&] { return criterion5(first); }},
      {6, criterion6},
      {7, criterion7},
      {8, criterion8},
      {9, [&] { return criterion9(first, second); }},
      {10, criterion10},
  };
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
