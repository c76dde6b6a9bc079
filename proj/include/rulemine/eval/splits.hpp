#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rulemine::eval {

struct Split {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  bool operator==(const Split&) const = default;
};

/// Repeated stratified holdout. Each class is shuffled and its first
/// round(test_frac * count) members (halves round down, at least one and at
/// most count - 1) go to test. Throws ConfigError for test_frac outside
/// (0, 1) or zero repeats and DataError for a present class with one sample.
std::vector<Split> stratified_split(std::span<const int> labels, std::size_t n_classes,
                                    double test_frac, std::size_t n_repeats, std::uint64_t seed);

/// Stratified k-fold: each class is shuffled and dealt round-robin over the
/// folds (the dealing position carries over between classes). Throws
/// DataError when a present class has fewer than k samples.
std::vector<Split> stratified_folds(std::span<const int> labels, std::size_t n_classes,
                                    std::size_t k, std::uint64_t seed);

}  // namespace rulemine::eval
