#include "rulemine/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "rulemine/error.hpp"

namespace rulemine::eval {

double weighted_f1(std::span<const int> y_true, std::span<const int> y_pred,
                   std::size_t n_classes) {
  if (y_true.empty()) throw DataError("weighted F1 of an empty sample");
  if (y_true.size() != y_pred.size()) throw DataError("label vectors differ in length");
  const std::size_t K = n_classes;
  std::vector<double> counts(K, 0.0);
  for (int t : y_true) {
    if (t < 0 || static_cast<std::size_t>(t) >= K) throw DataError("label out of range");
    counts[t] += 1.0;
  }
  std::size_t present = 0;
  for (double c : counts) present += c > 0;
  const double n = static_cast<double>(y_true.size());

  std::vector<double> conf(K * K, 0.0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int p = y_pred[i];
    if (p < 0 || static_cast<std::size_t>(p) >= K) throw DataError("label out of range");
    conf[y_true[i] * K + p] += n / (static_cast<double>(present) * counts[y_true[i]]);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (counts[k] == 0) continue;
    double tp = conf[k * K + k], fp = 0.0, fn = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      if (j == k) continue;
      fp += conf[j * K + k];
      fn += conf[k * K + j];
    }
    const double denom = 2 * tp + fp + fn;
    sum += denom > 0 ? 2 * tp / denom : 0.0;
  }
  return 100.0 * sum / static_cast<double>(present);
}

TupleSet rule_tuples(const mining::RuleSet& rules) {
  TupleSet out;
  for (const auto& per_class : rules.by_class)
    for (const auto& r : per_class)
      for (const auto& c : r.conditions)
        for (int level : c.levels()) out.emplace(c.feature, level);
  return out;
}

double jaccard(const TupleSet& a, const TupleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : a) inter += b.count(t);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(values.size()));
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

MeanStd jaccard_stability(std::span<const TupleSet> sets) {
  std::vector<double> js;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) js.push_back(100.0 * jaccard(sets[i], sets[j]));
  return mean_std(js);
}

std::size_t model_complexity(const learn::Model& model) {
  if (const auto* m = std::get_if<learn::LinearModel>(&model)) {
    if (m->kind != learn::LinearKind::LogisticL1) return m->n_features();
    std::size_t used = 0;
    for (std::size_t j = 0; j < m->n_features(); ++j)
      for (std::size_t k = 0; k < m->n_classes(); ++k)
        if (m->weights(k, j) != 0.0) {
          ++used;
          break;
        }
    return used;
  }
  if (const auto* m = std::get_if<learn::KernelModel>(&model)) return m->n_features();
  if (const auto* m = std::get_if<learn::TreeModel>(&model)) return m->used_features().size();
  return std::get<learn::ForestModel>(model).used_features().size();
}

}  // namespace rulemine::eval
