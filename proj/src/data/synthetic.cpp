#include "rulemine/data/synthetic.hpp"

#include <stdexcept>

#include "rulemine/error.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::data {

int label_synthetic(double x1, double x2, int x3, int x4) {
  if (!(x1 >= 0.0 && x1 <= 1.0) || !(x2 >= 0.0 && x2 <= 1.0) || (x3 != 0 && x3 != 1) ||
      x4 < 0 || x4 > 2)
    throw std::invalid_argument("synthetic input outside the rule-system domain");
  const auto color = static_cast<Color>(x4);
  if (color == Color::Red) {
    if (x3 == 1) return 0;
    return x2 <= 0.5 ? 0 : 1;
  }
  if (x1 >= 0.7) {
    if (x3 == 1) return 2;
    return x2 > 0.2 ? 0 : 1;
  }
  if (color == Color::Blue) return 0;
  return x1 <= 0.5 ? 1 : 0;
}

FeatureSchema synthetic_schema() {
  return FeatureSchema(
      {
          {"x1", FeatureKind::Continuous, {}},
          {"x2", FeatureKind::Continuous, {}},
          {"x3", FeatureKind::Categorical, {"0", "1"}},
          {"x4", FeatureKind::Categorical, {"blue", "white", "red"}},
      },
      {"y", {"0", "1", "2"}});
}

Dataset generate_synthetic(std::size_t n, double noise_rate, std::uint64_t seed) {
  if (n == 0) throw ConfigError("synthetic sample count must be positive");
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw ConfigError("noise rate must lie in [0, 1)");
  Rng rng(seed);
  std::vector<std::vector<double>> cols(4);
  for (auto& c : cols) c.reserve(n);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform();
    const double x2 = rng.uniform();
    const int x3 = static_cast<int>(rng.below(2));
    const int x4 = static_cast<int>(rng.below(3));
    int y = label_synthetic(x1, x2, x3, x4);
    if (rng.bernoulli(noise_rate)) {
      // One of the two other classes, uniformly.
      y = (y + 1 + static_cast<int>(rng.below(2))) % 3;
    }
    cols[0].push_back(x1);
    cols[1].push_back(x2);
    cols[2].push_back(x3);
    cols[3].push_back(x4);
    labels.push_back(y);
  }
  return Dataset(synthetic_schema(), std::move(cols), std::move(labels));
}

}  // namespace rulemine::data
