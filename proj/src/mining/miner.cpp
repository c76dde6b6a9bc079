#include "rulemine/mining/miner.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>

#include "rulemine/error.hpp"
#include "rulemine/parallel.hpp"

namespace rulemine::mining {

using data::BinnedDataset;
using data::FeatureKind;

void MiningConfig::validate() const {
  if (max_dimension < 1 || max_dimension > 2) throw ConfigError("rule dimension must be 1 or 2");
  if (!(z_min > 0)) throw ConfigError("z_min must be positive");
  if (n_bins == 0) throw ConfigError("bin count must be positive");
}

std::vector<Condition> enumerate_candidates_1d(std::size_t feature, FeatureKind kind,
                                               std::size_t k) {
  if (k == 0) throw std::invalid_argument("feature with no level");
  std::vector<Condition> out;
  if (kind == FeatureKind::Continuous) {
    out.reserve(k * (k + 1) / 2);
    for (int lo = 0; lo < static_cast<int>(k); ++lo)
      for (int hi = lo; hi < static_cast<int>(k); ++hi) out.push_back({feature, Interval{lo, hi}});
  } else {
    if (k > kMaxMinedArity)
      throw ConfigError("categorical arity " + std::to_string(k) + " too large for exhaustive mining");
    const std::uint64_t count = (std::uint64_t{1} << k) - 1;
    out.reserve(count);
    for (std::uint64_t mask = 1; mask <= count; ++mask) out.push_back({feature, CategorySet{mask}});
  }
  return out;
}

std::vector<std::vector<Condition>> enumerate_candidates_multi(
    std::span<const std::vector<Condition>> per_feature) {
  std::vector<std::vector<Condition>> out{{}};
  for (const auto& cands : per_feature) {
    std::vector<std::vector<Condition>> next;
    next.reserve(out.size() * cands.size());
    for (const auto& prefix : out)
      for (const auto& c : cands) {
        auto tuple = prefix;
        tuple.push_back(c);
        next.push_back(std::move(tuple));
      }
    out = std::move(next);
  }
  return out;
}

RuleStats score_rule(std::span<const Condition> conditions, int target_class,
                     const BinnedDataset& data, ZVariant variant) {
  RuleStats s;
  std::size_t class_total = 0;
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const bool hit = data.label(i) == target_class;
    class_total += hit;
    bool inside = true;
    for (const auto& c : conditions)
      if (!c.contains(data.level(i, c.feature))) {
        inside = false;
        break;
      }
    if (inside) {
      ++s.n;
      s.class_count += hit;
    }
  }
  s.p0 = static_cast<double>(class_total) / static_cast<double>(data.n_samples());
  s.p = s.n ? static_cast<double>(s.class_count) / static_cast<double>(s.n) : 0.0;
  s.z = z_score(s.n, s.p, s.p0, variant);
  return s;
}

std::vector<Rule> select_rules(std::span<const Rule> candidates, double z_min, double threshold) {
  std::vector<Rule> out;
  for (const auto& r : candidates)
    if (r.stats.scorable() && r.stats.z >= z_min &&
        static_cast<double>(r.stats.class_count) >= threshold)
      out.push_back(r);
  return out;
}

std::vector<Rule> prune_nested(std::span<const Rule> rules) {
  std::vector<bool> dropped(rules.size(), false);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      if (i == j || rules[i].conditions == rules[j].conditions) continue;
      if (!rules[j].covers(rules[i])) continue;
      // rules[i] is nested inside rules[j].
      if (rules[j].stats.z >= rules[i].stats.z)
        dropped[i] = true;
      else if (rules[j].has_continuous())
        dropped[j] = true;
    }
  }
  std::vector<Rule> out;
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (!dropped[i]) out.push_back(rules[i]);
  return out;
}

std::vector<double> class_size_thresholds(const BinnedDataset& data, std::size_t n_bins) {
  const auto counts = data.class_counts();
  const double n = static_cast<double>(data.n_samples());
  std::vector<double> out;
  for (auto c : counts) out.push_back(size_threshold(n, static_cast<double>(n_bins), static_cast<double>(c) / n));
  return out;
}

namespace {

// Replaces axis `axis` of a row-major count tensor (level axis of size k)
// by the candidate axis of the given conditions.
std::vector<std::int64_t> reduce_axis(const std::vector<std::int64_t>& in,
                                      std::vector<std::size_t>& dims, std::size_t axis,
                                      const std::vector<Condition>& cands) {
  const std::size_t k = dims[axis];
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const std::size_t m = cands.size();
  std::vector<std::int64_t> out(outer * m * inner, 0);
  const bool interval = cands.front().is_interval();
  std::vector<std::int64_t> acc(interval ? k + 1 : (std::size_t{1} << k), 0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < inner; ++r) {
      auto at = [&](std::size_t level) { return in[(o * k + level) * inner + r]; };
      if (interval) {
        acc[0] = 0;
        for (std::size_t b = 0; b < k; ++b) acc[b + 1] = acc[b] + at(b);
        for (std::size_t c = 0; c < m; ++c) {
          const auto& iv = cands[c].interval();
          out[(o * m + c) * inner + r] = acc[iv.hi + 1] - acc[iv.lo];
        }
      } else {
        acc[0] = 0;
        for (std::uint64_t mask = 1; mask < acc.size(); ++mask)
          acc[mask] = acc[mask & (mask - 1)] + at(static_cast<std::size_t>(std::countr_zero(mask)));
        for (std::size_t c = 0; c < m; ++c) out[(o * m + c) * inner + r] = acc[cands[c].categories().mask];
      }
    }
  }
  dims[axis] = m;
  return out;
}

std::vector<std::vector<std::size_t>> feature_tuples(std::size_t n_features, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  if (d > n_features) return out;
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == n_features - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Scores, selects and prunes every candidate on one feature tuple.
std::vector<std::vector<Rule>> mine_tuple(const BinnedDataset& data,
                                          const std::vector<std::size_t>& tuple,
                                          const MiningConfig& config,
                                          const std::vector<double>& thresholds,
                                          const std::vector<double>& priors) {
  const std::size_t n_classes = data.n_classes();
  std::vector<std::size_t> dims;
  std::vector<std::vector<Condition>> cands;
  for (auto f : tuple) {
    dims.push_back(data.level_count(f));
    cands.push_back(enumerate_candidates_1d(f, data.kind(f), data.level_count(f)));
  }
  dims.push_back(n_classes);

  std::size_t cells = 1;
  for (auto d : dims) cells *= d;
  std::vector<std::int64_t> hist(cells, 0);
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < tuple.size(); ++a) idx = idx * dims[a] + data.level(i, tuple[a]);
    ++hist[idx * n_classes + data.label(i)];
  }
  for (std::size_t a = tuple.size(); a-- > 0;) hist = reduce_axis(hist, dims, a, cands[a]);

  std::vector<std::vector<Rule>> selected(n_classes);
  const std::size_t n_tuples = hist.size() / n_classes;
  std::vector<std::size_t> pos(tuple.size(), 0);
  for (std::size_t t = 0; t < n_tuples; ++t) {
    // pos enumerates candidate tuples in row-major order (first feature outermost).
    const std::int64_t* counts = &hist[t * n_classes];
    const std::int64_t n = std::accumulate(counts, counts + n_classes, std::int64_t{0});
    for (std::size_t c = 0; c < n_classes; ++c) {
      RuleStats s;
      s.n = static_cast<std::size_t>(n);
      s.class_count = static_cast<std::size_t>(counts[c]);
      s.p0 = priors[c];
      s.p = n ? static_cast<double>(counts[c]) / static_cast<double>(n) : 0.0;
      s.z = z_score(s.n, s.p, s.p0, config.z_variant);
      if (!s.scorable() || s.z < config.z_min || static_cast<double>(s.class_count) < thresholds[c])
        continue;
      Rule r;
      r.target_class = static_cast<int>(c);
      r.stats = s;
      for (std::size_t a = 0; a < tuple.size(); ++a) r.conditions.push_back(cands[a][pos[a]]);
      selected[c].push_back(std::move(r));
    }
    for (std::size_t a = tuple.size(); a-- > 0;) {
      if (++pos[a] < cands[a].size()) break;
      pos[a] = 0;
    }
  }
  for (auto& rules : selected) rules = prune_nested(rules);
  return selected;
}

}  // namespace

RuleSet mine(const BinnedDataset& data, const MiningConfig& config) {
  config.validate();
  const auto counts = data.class_counts();
  std::vector<double> priors;
  for (auto c : counts) priors.push_back(static_cast<double>(c) / static_cast<double>(data.n_samples()));
  const auto thresholds = class_size_thresholds(data, config.n_bins);

  std::vector<std::vector<std::size_t>> tuples;
  for (std::size_t d = 1; d <= config.max_dimension; ++d) {
    auto t = feature_tuples(data.n_features(), d);
    tuples.insert(tuples.end(), t.begin(), t.end());
  }
  std::vector<std::vector<std::vector<Rule>>> results(tuples.size());
  parallel_for(tuples.size(), config.jobs, [&](std::size_t i) {
    results[i] = mine_tuple(data, tuples[i], config, thresholds, priors);
  });

  RuleSet out(data.n_classes());
  for (auto& per_tuple : results)
    for (std::size_t c = 0; c < per_tuple.size(); ++c)
      for (auto& r : per_tuple[c]) out.by_class[c].push_back(std::move(r));
  out.canonicalize();
  return out;
}

}  // namespace rulemine::mining
