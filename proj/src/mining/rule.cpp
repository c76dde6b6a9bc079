#include "rulemine/mining/rule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rulemine::mining {

bool Condition::contains(int level) const {
  if (const auto* iv = std::get_if<Interval>(&payload)) return iv->lo <= level && level <= iv->hi;
  return level >= 0 && level < 64 && ((categories().mask >> level) & 1U);
}

bool Condition::covers(const Condition& inner) const {
  if (feature != inner.feature || payload.index() != inner.payload.index()) return false;
  if (is_interval()) return interval().lo <= inner.interval().lo && inner.interval().hi <= interval().hi;
  return (inner.categories().mask & ~categories().mask) == 0;
}

std::vector<int> Condition::levels() const {
  std::vector<int> out;
  if (is_interval()) {
    for (int b = interval().lo; b <= interval().hi; ++b) out.push_back(b);
  } else {
    for (int c = 0; c < 64; ++c)
      if ((categories().mask >> c) & 1U) out.push_back(c);
  }
  return out;
}

double z_score(std::size_t n, double p, double p0, ZVariant variant) {
  if (n == 0 || p <= 0.0) return kUnscorable;
  const double denom = variant == ZVariant::AsPrinted ? p * (1.0 - p0) : p0 * (1.0 - p0);
  const double diff = p - p0;
  if (denom <= 0.0) return diff == 0.0 ? 0.0 : kUnscorable;
  return std::sqrt(static_cast<double>(n)) * diff / std::sqrt(denom);
}

double size_threshold(double n_samples, double n_bins, double class_share) {
  if (n_samples < 0 || n_bins <= 0 || class_share < 0)
    throw std::invalid_argument("size_threshold: invalid arguments");
  return n_samples / n_bins * class_share;
}

std::vector<std::size_t> Rule::features() const {
  std::vector<std::size_t> out;
  for (const auto& c : conditions) out.push_back(c.feature);
  return out;
}

bool Rule::has_continuous() const {
  return std::any_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.is_interval(); });
}

bool Rule::has_categorical() const {
  return std::any_of(conditions.begin(), conditions.end(), [](const Condition& c) { return !c.is_interval(); });
}

bool Rule::matches(const data::BinnedDataset& ds, std::size_t sample) const {
  for (const auto& c : conditions)
    if (!c.contains(ds.level(sample, c.feature))) return false;
  return true;
}

bool Rule::covers(const Rule& inner) const {
  if (conditions.size() != inner.conditions.size()) return false;
  for (std::size_t i = 0; i < conditions.size(); ++i)
    if (!conditions[i].covers(inner.conditions[i])) return false;
  return true;
}

bool canonical_less(const Rule& a, const Rule& b) {
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  for (std::size_t i = 0; i < a.conditions.size(); ++i)
    if (a.conditions[i].feature != b.conditions[i].feature)
      return a.conditions[i].feature < b.conditions[i].feature;
  for (std::size_t i = 0; i < a.conditions.size(); ++i)
    if (a.conditions[i] != b.conditions[i]) return a.conditions[i] < b.conditions[i];
  return a.target_class < b.target_class;
}

std::size_t RuleSet::size() const {
  std::size_t n = 0;
  for (const auto& rules : by_class) n += rules.size();
  return n;
}

std::vector<Rule> RuleSet::flatten() const {
  std::vector<Rule> out;
  for (const auto& rules : by_class) out.insert(out.end(), rules.begin(), rules.end());
  return out;
}

void RuleSet::canonicalize() {
  for (auto& rules : by_class) std::sort(rules.begin(), rules.end(), canonical_less);
}

}  // namespace rulemine::mining
