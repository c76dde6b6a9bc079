#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "rulemine/data/quantizer.hpp"

namespace rulemine::mining {

/// Contiguous run of bins [lo, hi], 0-based and inclusive.
struct Interval {
  int lo = 0;
  int hi = 0;
  auto operator<=>(const Interval&) const = default;
};

/// Non-empty set of category indices, bit i standing for category i.
struct CategorySet {
  std::uint64_t mask = 0;
  auto operator<=>(const CategorySet&) const = default;
};

struct Condition {
  std::size_t feature = 0;
  std::variant<Interval, CategorySet> payload;

  bool is_interval() const { return std::holds_alternative<Interval>(payload); }
  const Interval& interval() const { return std::get<Interval>(payload); }
  const CategorySet& categories() const { return std::get<CategorySet>(payload); }

  bool contains(int level) const;
  /// Same feature and every level of `inner` is also a level of this.
  bool covers(const Condition& inner) const;
  /// Levels satisfying the condition, ascending.
  std::vector<int> levels() const;

  auto operator<=>(const Condition&) const = default;
};

inline constexpr double kUnscorable = -std::numeric_limits<double>::infinity();

struct RuleStats {
  std::size_t n = 0;            // samples satisfying every condition
  std::size_t class_count = 0;  // of those, samples of the target class
  double p = 0.0;
  double p0 = 0.0;
  double z = kUnscorable;

  bool scorable() const { return z != kUnscorable; }
  bool operator==(const RuleStats&) const = default;
};

enum class ZVariant {
  AsPrinted,  // sqrt(n) (p - p0) / sqrt(p (1 - p0))
  Standard,   // sqrt(n) (p - p0) / sqrt(p0 (1 - p0))
};

/// Rule quality statistic; kUnscorable when n = 0 or p = 0.
double z_score(std::size_t n, double p, double p0, ZVariant variant = ZVariant::AsPrinted);

/// Minimum in-rule class count: n_samples / n_bins * class_share.
double size_threshold(double n_samples, double n_bins, double class_share);

struct Rule {
  std::vector<Condition> conditions;  // sorted by feature, features distinct
  int target_class = 0;
  RuleStats stats;

  std::size_t dimension() const { return conditions.size(); }
  std::vector<std::size_t> features() const;
  bool has_continuous() const;
  bool has_categorical() const;
  bool matches(const data::BinnedDataset& ds, std::size_t sample) const;
  /// Same features and each condition covers the other rule's condition.
  bool covers(const Rule& inner) const;

  bool operator==(const Rule&) const = default;
};

/// Canonical order: dimension, feature ids, then condition bounds.
bool canonical_less(const Rule& a, const Rule& b);

/// Rules grouped by target class.
struct RuleSet {
  std::vector<std::vector<Rule>> by_class;

  RuleSet() = default;
  explicit RuleSet(std::size_t n_classes) : by_class(n_classes) {}

  std::size_t n_classes() const { return by_class.size(); }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// Class-major, canonical order within each class.
  std::vector<Rule> flatten() const;
  void canonicalize();

  bool operator==(const RuleSet&) const = default;
};

}  // namespace rulemine::mining
