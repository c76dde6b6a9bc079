#include "rulemine/features/local_features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rulemine/data/csv.hpp"
#include "rulemine/error.hpp"
#include "rulemine/mining/rule_io.hpp"
#include "rulemine/parallel.hpp"

namespace rulemine::features {

DeltaWeights DeltaWeights::fit(const data::Dataset& train, const mining::RuleSet& rules,
                               FrequencyScope scope) {
  const std::size_t p = train.n_features();
  DeltaWeights w;
  for (std::size_t f = 0; f < p; ++f) {
    FeatureRange r{0.0, 0.0};
    bool first = true;
    for (double v : train.column(f)) {
      if (data::is_missing(v)) continue;
      if (first) {
        r = {v, v};
        first = false;
      }
      r.min = std::min(r.min, v);
      r.max = std::max(r.max, v);
    }
    w.ranges.push_back(r);
  }

  auto frequencies = [&](const std::vector<mining::Rule>& rs) {
    std::vector<double> freq(p, 0.0);
    for (const auto& r : rs)
      for (const auto& c : r.conditions) {
        if (c.feature >= p) throw DataError("rule references unknown feature");
        freq[c.feature] += 1.0;
      }
    if (!rs.empty())
      for (auto& v : freq) v /= static_cast<double>(rs.size());
    return freq;
  };
  if (scope == FrequencyScope::Global) {
    auto all = frequencies(rules.flatten());
    w.feature_frequency.assign(rules.n_classes(), all);
  } else {
    for (const auto& rs : rules.by_class) w.feature_frequency.push_back(frequencies(rs));
  }
  return w;
}

double delta_distance(std::span<const double> x, std::span<const double> centers,
                      std::span<const double> feature_weights,
                      std::span<const FeatureRange> ranges, double rule_weight) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double span = ranges[i].max - ranges[i].min;
    if (!(span > 0)) throw DataError("zero feature range in distance computation");
    double d = x[i] == centers[i] ? 1.0 : 1.0 - std::abs(x[i] - centers[i]) / span;
    d = std::max(0.0, d);
    sum += (feature_weights[i] * d) * (feature_weights[i] * d);
  }
  return rule_weight * std::sqrt(sum);
}

namespace {

struct DeltaPlan {
  std::vector<std::size_t> features;
  std::vector<double> centers, weights;
  std::vector<FeatureRange> ranges;
  double rule_weight = 0.0;
};

DeltaPlan plan_for(const mining::Rule& rule, const data::BinMap& bins, const DeltaWeights& w) {
  DeltaPlan plan;
  plan.rule_weight = rule.stats.z;
  for (const auto& c : rule.conditions) {
    if (!c.is_interval()) continue;
    const auto& fb = bins.feature(c.feature);
    const double lo = fb.lower(c.interval().lo), hi = fb.upper(c.interval().hi);
    plan.features.push_back(c.feature);
    plan.centers.push_back(lo + (hi - lo) / 2.0);
    plan.weights.push_back(w.feature_frequency.at(rule.target_class).at(c.feature));
    plan.ranges.push_back(w.ranges.at(c.feature));
  }
  return plan;
}

}  // namespace

double delta_distance(std::span<const double> sample, const mining::Rule& rule,
                      const data::BinMap& bins, const DeltaWeights& weights) {
  DeltaPlan plan = plan_for(rule, bins, weights);
  std::vector<double> x;
  for (std::size_t f : plan.features) x.push_back(sample[f]);
  return delta_distance(x, plan.centers, plan.weights, plan.ranges, plan.rule_weight);
}

LocalFeatures transform(const data::Dataset& data, const mining::RuleSet& rules,
                        const data::BinMap& bins, const DeltaWeights& weights,
                        Encoding encoding, unsigned jobs) {
  if (bins.n_features() != data.n_features())
    throw DataError("bin map and dataset disagree on the feature count");
  LocalFeatures out;
  out.encoding = encoding;
  out.rules = rules.flatten();
  for (const auto& r : out.rules)
    for (const auto& c : r.conditions)
      if (c.feature >= data.n_features()) throw DataError("rule references unknown feature");
  if (data.missing_count() > 0) throw DataError("transform needs an imputed dataset");

  const data::BinnedDataset binned = bins.apply(data);
  const std::size_t n = data.n_samples(), m = out.rules.size();
  out.values = Matrix(n, m);
  parallel_for(m, jobs, [&](std::size_t j) {
    const mining::Rule& rule = out.rules[j];
    const bool use_delta = encoding == Encoding::Distance && rule.has_continuous();
    if (!use_delta) {
      for (std::size_t i = 0; i < n; ++i) out.values(i, j) = rule.matches(binned, i) ? 1.0 : 0.0;
      return;
    }
    DeltaPlan plan = plan_for(rule, bins, weights);
    std::vector<double> x(plan.features.size());
    for (std::size_t i = 0; i < n; ++i) {
      bool gate = true;
      for (const auto& c : rule.conditions)
        if (!c.is_interval() && !c.contains(binned.level(i, c.feature))) {
          gate = false;
          break;
        }
      if (!gate) continue;
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = data.value(i, plan.features[k]);
      out.values(i, j) =
          delta_distance(x, plan.centers, plan.weights, plan.ranges, plan.rule_weight);
    }
  });
  return out;
}

void write_local_features(const LocalFeatures& lf, const data::FeatureSchema& schema,
                          std::ostream& out, std::span<const int> labels) {
  if (!labels.empty() && labels.size() != lf.values.rows())
    throw DataError("label count does not match the feature matrix");
  out << "# encoding: " << (lf.encoding == Encoding::Binary ? "binary" : "distance") << '\n';
  for (std::size_t j = 0; j < lf.rules.size(); ++j) {
    const auto& r = lf.rules[j];
    out << "# r" << j << ": " << mining::describe_rule(r, schema)
        << " (z=" << data::format_double(r.stats.z) << ")\n";
  }
  for (std::size_t j = 0; j < lf.rules.size(); ++j) out << (j ? "," : "") << 'r' << j;
  if (!labels.empty()) out << (lf.rules.empty() ? "" : ",") << schema.target().name;
  out << '\n';
  for (std::size_t i = 0; i < lf.values.rows(); ++i) {
    for (std::size_t j = 0; j < lf.values.cols(); ++j)
      out << (j ? "," : "") << data::format_double(lf.values(i, j));
    if (!labels.empty())
      out << (lf.values.cols() ? "," : "") << schema.target().labels.at(labels[i]);
    out << '\n';
  }
}

}  // namespace rulemine::features
