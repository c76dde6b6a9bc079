#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "rulemine/data/quantizer.hpp"
#include "rulemine/mining/rule.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::test {

using data::BinnedDataset;
using data::FeatureKind;
using mining::Rule;

// Naive reference miner: enumerates every condition combination with plain
// loops, counts membership sample by sample, filters, then resolves nesting
// by comparing every pair.
struct RefCondition {
  std::size_t feature;
  bool interval;
  int lo, hi;          // interval bounds
  std::uint64_t mask;  // category subset
  bool has(int level) const {
    return interval ? (level >= lo && level <= hi) : ((mask >> level) & 1u) != 0;
  }
  bool covers(const RefCondition& o) const {
    return interval ? (lo <= o.lo && o.hi <= hi) : ((o.mask & ~mask) == 0);
  }
  bool operator==(const RefCondition& o) const {
    return feature == o.feature && interval == o.interval && lo == o.lo && hi == o.hi &&
           mask == o.mask;
  }
};

struct RefRule {
  std::vector<RefCondition> conds;
  int cls;
  std::size_t n, hits;
  double z;
};

inline std::vector<RefCondition> ref_candidates(const BinnedDataset& d, std::size_t f) {
  std::vector<RefCondition> out;
  const int k = static_cast<int>(d.level_count(f));
  if (d.kind(f) == FeatureKind::Continuous) {
    for (int lo = 0; lo < k; ++lo)
      for (int hi = lo; hi < k; ++hi) out.push_back({f, true, lo, hi, 0});
  } else {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << k); ++m) out.push_back({f, false, 0, 0, m});
  }
  return out;
}

inline std::vector<RefRule> reference_mine(const BinnedDataset& d, std::size_t max_dim, double z_min,
                                    double n_bins) {
  const std::size_t n = d.n_samples(), p = d.n_features(), K = d.n_classes();
  std::vector<std::vector<std::size_t>> tuples;
  for (std::size_t a = 0; a < p; ++a) tuples.push_back({a});
  if (max_dim >= 2)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) tuples.push_back({a, b});

  std::vector<RefRule> out;
  for (int c = 0; c < static_cast<int>(K); ++c) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += d.label(i) == c;
    const double p0 = static_cast<double>(total) / static_cast<double>(n);
    const double threshold = static_cast<double>(n) / n_bins * p0;
    for (const auto& t : tuples) {
      std::vector<std::vector<RefCondition>> combos{{}};
      for (auto f : t) {
        std::vector<std::vector<RefCondition>> next;
        for (const auto& pre : combos)
          for (const auto& cand : ref_candidates(d, f)) {
            auto v = pre;
            v.push_back(cand);
            next.push_back(v);
          }
        combos = next;
      }
      std::vector<RefRule> kept;
      for (const auto& conds : combos) {
        std::size_t in = 0, hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
          bool ok = true;
          for (const auto& rc : conds) ok = ok && rc.has(d.level(i, rc.feature));
          if (ok) {
            ++in;
            hits += d.label(i) == c;
          }
        }
        if (in == 0 || hits == 0) continue;
        const double pr = static_cast<double>(hits) / static_cast<double>(in);
        const double z = std::sqrt(static_cast<double>(in)) * (pr - p0) / std::sqrt(pr * (1.0 - p0));
        if (z >= z_min && static_cast<double>(hits) >= threshold) kept.push_back({conds, c, in, hits, z});
      }
      // Nesting: inner dropped when an outer rule has z >= its own; outer
      // dropped when an inner rule beats it and the rules are not purely
      // categorical.
      std::vector<bool> drop(kept.size(), false);
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = 0; j < kept.size(); ++j) {
          if (i == j) continue;
          bool j_covers_i = true, same = true, continuous = false;
          for (std::size_t q = 0; q < t.size(); ++q) {
            j_covers_i = j_covers_i && kept[j].conds[q].covers(kept[i].conds[q]);
            same = same && kept[j].conds[q] == kept[i].conds[q];
            continuous = continuous || kept[j].conds[q].interval;
          }
          if (!j_covers_i || same) continue;
          if (kept[j].z >= kept[i].z) drop[i] = true;
          else if (continuous) drop[j] = true;
        }
      for (std::size_t i = 0; i < kept.size(); ++i)
        if (!drop[i]) out.push_back(kept[i]);
    }
  }
  return out;
}

using Key = std::tuple<int, std::vector<std::tuple<std::size_t, int, int, std::uint64_t>>>;

inline Key key_of(int cls, const std::vector<RefCondition>& cs) {
  std::vector<std::tuple<std::size_t, int, int, std::uint64_t>> v;
  for (const auto& c : cs) v.emplace_back(c.feature, c.lo, c.hi, c.mask);
  return {cls, v};
}

inline Key key_of(const Rule& r) {
  std::vector<std::tuple<std::size_t, int, int, std::uint64_t>> v;
  for (const auto& c : r.conditions) {
    if (c.is_interval())
      v.emplace_back(c.feature, c.interval().lo, c.interval().hi, 0);
    else
      v.emplace_back(c.feature, 0, 0, c.categories().mask);
  }
  return {r.target_class, v};
}

inline BinnedDataset random_instance(Rng& rng) {
  const std::size_t p = 1 + rng.below(3);
  const std::size_t n = 8 + rng.below(53);
  const std::size_t K = 2 + rng.below(2);
  std::vector<data::FeatureSpec> specs;
  std::vector<std::size_t> counts;
  std::vector<std::vector<int>> levels(p);
  for (std::size_t f = 0; f < p; ++f) {
    const bool categorical = rng.bernoulli(0.4);
    const std::size_t k = categorical ? 2 + rng.below(3) : 1 + rng.below(4);
    data::FeatureSpec s{"f" + std::to_string(f),
                        categorical ? FeatureKind::Categorical : FeatureKind::Continuous,
                        {}};
    if (categorical)
      for (std::size_t c = 0; c < k; ++c) s.categories.push_back("v" + std::to_string(c));
    specs.push_back(s);
    counts.push_back(k);
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Labels lean on feature 0 so that rules exist.
    for (std::size_t f = 0; f < p; ++f) levels[f].push_back(static_cast<int>(rng.below(counts[f])));
    labels[i] = rng.bernoulli(0.6) ? levels[0][i] % static_cast<int>(K)
                                   : static_cast<int>(rng.below(K));
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < K; ++k) names.push_back("c" + std::to_string(k));
  return BinnedDataset(data::FeatureSchema(specs, {"y", names}), counts, levels, labels);
}

/// Exact set equality of rule identities plus matching counts and z.
inline bool same_rules(const mining::RuleSet& got, const std::vector<RefRule>& want) {
  std::map<Key, const Rule*> g;
  for (const auto& per : got.by_class)
    for (const auto& r : per) g[key_of(r)] = &r;
  if (g.size() != got.size() || g.size() != want.size()) return false;
  for (const auto& r : want) {
    auto it = g.find(key_of(r.cls, r.conds));
    if (it == g.end()) return false;
    const auto& s = it->second->stats;
    if (s.n != r.n || s.class_count != r.hits || std::abs(s.z - r.z) > 1e-12 * (1 + std::abs(r.z)))
      return false;
  }
  return true;
}

}  // namespace rulemine::test
