#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "rulemine/data/dataset.hpp"
#include "rulemine/data/quantizer.hpp"
#include "rulemine/matrix.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::features {

enum class Encoding {
  Binary,        // membership indicator for every rule
  Distance,  // indicator for categorical rules, distance for continuous and mixed ones
};

enum class FrequencyScope { PerClass, Global };

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const FeatureRange&) const = default;
};

/// Weights of the rule-center distance. The rule weight is the rule's z.
struct DeltaWeights {
  /// [class][feature]: share of the class's rules (or of all rules, for the
  /// global scope) that constrain the feature.
  std::vector<std::vector<double>> feature_frequency;
  /// Training range per feature on the original scale.
  std::vector<FeatureRange> ranges;

  static DeltaWeights fit(const data::Dataset& train, const mining::RuleSet& rules,
                          FrequencyScope scope = FrequencyScope::PerClass);
};

/// w_r * sqrt(sum_i (w_i delta_i)^2) over the rule's continuous conditions,
/// delta_i = max(0, 1 - |x_i - center_i| / (max_i - min_i)). The center is
/// the midpoint of the value interval spanned by the condition's bins.
/// `sample` holds every feature on the original scale.
double delta_distance(std::span<const double> sample, const mining::Rule& rule,
                      const data::BinMap& bins, const DeltaWeights& weights);

/// Same, with explicit per-condition values (the fixture form).
double delta_distance(std::span<const double> x, std::span<const double> centers,
                      std::span<const double> feature_weights,
                      std::span<const FeatureRange> ranges, double rule_weight);

struct LocalFeatures {
  Matrix values;                   // samples x rules
  std::vector<mining::Rule> rules; // column order (class-major, canonical)
  Encoding encoding = Encoding::Distance;
};

/// `data` must already be imputed; levels come from `bins`.
LocalFeatures transform(const data::Dataset& data, const mining::RuleSet& rules,
                        const data::BinMap& bins, const DeltaWeights& weights,
                        Encoding encoding, unsigned jobs = 1);

/// CSV with '#' comment lines describing each column's rule, a header row of
/// column names, then one row per sample; labels are appended when given.
void write_local_features(const LocalFeatures& lf, const data::FeatureSchema& schema,
                          std::ostream& out, std::span<const int> labels = {});

}  // namespace rulemine::features
