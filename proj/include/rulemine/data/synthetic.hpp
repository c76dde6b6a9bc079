#pragma once

#include <cstddef>
#include <cstdint>

#include "rulemine/data/dataset.hpp"

namespace rulemine::data {

// Three-class rule system over x1, x2 in [0,1], x3 in {0,1} and
// x4 in {blue, white, red}. The labeling is the decision tree:
//
//   x4 = red:    x3 = 1            -> 0
//                x3 = 0, x2 <= 0.5 -> 0,  x2 > 0.5 -> 1
//   x4 = blue:   x1 <  0.7         -> 0
//   x4 = white:  x1 <= 0.5         -> 1,  0.5 < x1 < 0.7 -> 0
//   blue/white with x1 >= 0.7:
//                x3 = 1            -> 2
//                x3 = 0, x2 > 0.2  -> 0,  x2 <= 0.2 -> 1
enum class Color : int { Blue = 0, White = 1, Red = 2 };

/// Throws std::invalid_argument outside the domain.
int label_synthetic(double x1, double x2, int x3, int x4);

FeatureSchema synthetic_schema();

/// Draws x1, x2 ~ U[0,1], x3 ~ U{0,1}, x4 ~ U{blue,white,red}, labels each
/// sample, then with probability noise_rate relabels it to a uniformly
/// chosen different class.
Dataset generate_synthetic(std::size_t n, double noise_rate, std::uint64_t seed);

}  // namespace rulemine::data
