#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rulemine::learn {

/// "Balanced" weights: n / (n_classes * count_k); 0 for absent classes.
std::vector<double> balanced_class_weights(std::span<const int> y, std::size_t n_classes);

/// Per-sample weights, each sample taking its class weight.
std::vector<double> balanced_sample_weights(std::span<const int> y, std::size_t n_classes);

/// Throws ConfigError unless at least two classes are present and every
/// label lies in [0, n_classes).
void check_labels(std::span<const int> y, std::size_t n_classes);

}  // namespace rulemine::learn
