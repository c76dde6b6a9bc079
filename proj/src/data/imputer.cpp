#include "rulemine/data/imputer.hpp"

#include <algorithm>

#include "rulemine/error.hpp"

namespace rulemine::data {

Imputer Imputer::fit(const Dataset& train) {
  Imputer imp;
  imp.fills_.reserve(train.n_features());
  for (std::size_t f = 0; f < train.n_features(); ++f) {
    const auto& spec = train.schema().feature(f);
    std::vector<double> observed;
    for (double v : train.column(f))
      if (!is_missing(v)) observed.push_back(v);
    if (observed.empty()) throw DataError("feature '" + spec.name + "' has no observed value");

    if (spec.kind == FeatureKind::Continuous) {
      std::sort(observed.begin(), observed.end());
      const auto m = observed.size();
      imp.fills_.push_back(m % 2 ? observed[m / 2] : 0.5 * (observed[m / 2 - 1] + observed[m / 2]));
    } else {
      std::vector<std::size_t> counts(spec.categories.size(), 0);
      for (double v : observed) ++counts[static_cast<std::size_t>(v)];
      // max_element returns the first maximum: ties go to the lowest index.
      auto mode = std::max_element(counts.begin(), counts.end()) - counts.begin();
      imp.fills_.push_back(static_cast<double>(mode));
    }
  }
  return imp;
}

Imputer Imputer::from_fill_values(std::vector<double> fills) {
  Imputer imp;
  imp.fills_ = std::move(fills);
  return imp;
}

Dataset Imputer::apply(const Dataset& ds) const {
  if (fills_.size() != ds.n_features()) throw ConfigError("imputer fitted on a different schema");
  if (ds.missing_count() == 0) return ds;
  std::vector<std::vector<double>> cols(ds.n_features());
  for (std::size_t f = 0; f < ds.n_features(); ++f) {
    auto src = ds.column(f);
    cols[f].assign(src.begin(), src.end());
    for (double& v : cols[f])
      if (is_missing(v)) v = fills_[f];
  }
  return Dataset(ds.schema(), std::move(cols), std::vector<int>(ds.labels().begin(), ds.labels().end()));
}

}  // namespace rulemine::data
