#pragma once

#include <vector>

#include "rulemine/data/dataset.hpp"

namespace rulemine::data {

/// Median (continuous) / modal category (categorical) fill values.
class Imputer {
 public:
  Imputer() = default;

  /// Throws DataError if some feature has no observed value.
  static Imputer fit(const Dataset& train);
  Dataset apply(const Dataset& ds) const;

  bool fitted() const { return !fills_.empty(); }
  const std::vector<double>& fill_values() const { return fills_; }

  static Imputer from_fill_values(std::vector<double> fills);

 private:
  std::vector<double> fills_;
};

}  // namespace rulemine::data
