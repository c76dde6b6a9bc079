#include "rulemine/alt/assoc_rules.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "rulemine/error.hpp"
#include "rulemine/mining/miner.hpp"

namespace rulemine::alt {
namespace {

using Bits = std::vector<std::uint64_t>;

struct Item {
  std::size_t feature;
  int level;
};

std::size_t count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

Bits conjunction(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

}  // namespace

mining::RuleSet assoc_rules(const data::BinnedDataset& data, const AssocRuleConfig& config) {
  if (config.max_items == 0) throw ConfigError("itemsets need at least one item");
  if (!(config.z_min > 0)) throw ConfigError("z_min must be positive");
  if (config.n_bins == 0) throw ConfigError("bin count must be positive");
  const std::size_t n = data.n_samples();
  if (n == 0) throw DataError("cannot mine an empty dataset");
  const auto thresholds = mining::class_size_thresholds(data, config.n_bins);

  std::size_t min_support = config.min_support;
  if (min_support == 0) {
    double smallest = static_cast<double>(n);
    auto counts = data.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] > 0) smallest = std::min(smallest, thresholds[c]);
    min_support = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(smallest)));
  }

  const std::size_t words = (n + 63) / 64;
  std::vector<Item> items;
  std::vector<Bits> item_bits;
  for (std::size_t f = 0; f < data.n_features(); ++f)
    for (int l = 0; l < static_cast<int>(data.level_count(f)); ++l) {
      Bits b(words, 0);
      for (std::size_t i = 0; i < n; ++i)
        if (data.level(i, f) == l) b[i / 64] |= std::uint64_t{1} << (i % 64);
      if (count(b) >= min_support) {
        items.push_back({f, l});
        item_bits.push_back(std::move(b));
      }
    }

  // Frequent itemsets level by level; itemsets hold ascending item indices.
  std::map<std::vector<std::size_t>, Bits> level;
  for (std::size_t i = 0; i < items.size(); ++i) level[{i}] = item_bits[i];
  std::vector<std::pair<std::vector<std::size_t>, Bits>> frequent(level.begin(), level.end());
  for (std::size_t size = 2; size <= config.max_items && !level.empty(); ++size) {
    std::map<std::vector<std::size_t>, Bits> next;
    for (auto a = level.begin(); a != level.end(); ++a) {
      for (auto b = std::next(a); b != level.end(); ++b) {
        if (!std::equal(a->first.begin(), a->first.end() - 1, b->first.begin())) break;
        const std::size_t last_a = a->first.back(), last_b = b->first.back();
        if (items[last_a].feature == items[last_b].feature) continue;
        std::vector<std::size_t> cand = a->first;
        cand.push_back(last_b);
        bool closed = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && closed; ++drop) {
          std::vector<std::size_t> sub;
          for (std::size_t k = 0; k < cand.size(); ++k)
            if (k != drop) sub.push_back(cand[k]);
          closed = level.count(sub) > 0;
        }
        if (!closed) continue;
        Bits bits = conjunction(a->second, item_bits[last_b]);
        if (count(bits) >= min_support) next.emplace(std::move(cand), std::move(bits));
      }
    }
    frequent.insert(frequent.end(), next.begin(), next.end());
    level = std::move(next);
  }

  mining::RuleSet out(data.n_classes());
  for (const auto& [set, bits] : frequent) {
    std::vector<mining::Condition> conds;
    for (std::size_t idx : set) {
      const Item& it = items[idx];
      if (data.kind(it.feature) == data::FeatureKind::Continuous)
        conds.push_back({it.feature, mining::Interval{it.level, it.level}});
      else
        conds.push_back({it.feature, mining::CategorySet{std::uint64_t{1} << it.level}});
    }
    std::sort(conds.begin(), conds.end(),
              [](const auto& a, const auto& b) { return a.feature < b.feature; });
    for (std::size_t c = 0; c < data.n_classes(); ++c) {
      mining::Rule rule;
      rule.conditions = conds;
      rule.target_class = static_cast<int>(c);
      rule.stats = mining::score_rule(conds, rule.target_class, data, config.z_variant);
      auto kept = mining::select_rules(std::span(&rule, 1), config.z_min, thresholds[c]);
      if (!kept.empty()) out.by_class[c].push_back(std::move(rule));
    }
  }
  out.canonicalize();
  return out;
}

}  // namespace rulemine::alt
