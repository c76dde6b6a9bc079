#include "rulemine/learn/class_weights.hpp"

#include <string>

#include "rulemine/error.hpp"

namespace rulemine::learn {

void check_labels(std::span<const int> y, std::size_t n_classes) {
  if (n_classes < 2) throw ConfigError("classifier needs at least two classes");
  std::vector<bool> seen(n_classes, false);
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
      throw DataError("label " + std::to_string(label) + " out of range");
    seen[label] = true;
  }
  std::size_t present = 0;
  for (bool s : seen) present += s;
  if (present < 2) throw DataError("training labels contain fewer than two classes");
}

std::vector<double> balanced_class_weights(std::span<const int> y, std::size_t n_classes) {
  std::vector<double> counts(n_classes, 0.0);
  for (int label : y) counts.at(label) += 1.0;
  std::vector<double> weights(n_classes, 0.0);
  for (std::size_t k = 0; k < n_classes; ++k)
    if (counts[k] > 0)
      weights[k] = static_cast<double>(y.size()) / (static_cast<double>(n_classes) * counts[k]);
  return weights;
}

std::vector<double> balanced_sample_weights(std::span<const int> y, std::size_t n_classes) {
  auto cw = balanced_class_weights(y, n_classes);
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = cw[y[i]];
  return out;
}

}  // namespace rulemine::learn
