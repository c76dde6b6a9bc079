#include "rulemine/eval/splits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rulemine/error.hpp"
#include "rulemine/rng.hpp"

namespace rulemine::eval {
namespace {

std::vector<std::vector<std::size_t>> by_class(std::span<const int> labels, std::size_t n_classes) {
  std::vector<std::vector<std::size_t>> out(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes)
      throw DataError("label out of range");
    out[labels[i]].push_back(i);
  }
  return out;
}

}  // namespace

std::vector<Split> stratified_split(std::span<const int> labels, std::size_t n_classes,
                                    double test_frac, std::size_t n_repeats, std::uint64_t seed) {
  if (!(test_frac > 0.0 && test_frac < 1.0)) throw ConfigError("test fraction must lie in (0, 1)");
  if (n_repeats == 0) throw ConfigError("split count must be positive");
  const auto groups = by_class(labels, n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    if (groups[c].size() == 1)
      throw DataError("class " + std::to_string(c) + " has a single sample; cannot stratify");

  std::vector<Split> plan;
  for (std::size_t r = 0; r < n_repeats; ++r) {
    Rng rng(derive_seed(seed, "split", {r}));
    Split s;
    for (auto members : groups) {
      if (members.empty()) continue;
      rng.shuffle(std::span<std::size_t>(members));
      const double exact = test_frac * static_cast<double>(members.size());
      auto t = static_cast<std::size_t>(std::ceil(exact - 0.5));
      t = std::clamp<std::size_t>(t, 1, members.size() - 1);
      s.test.insert(s.test.end(), members.begin(), members.begin() + t);
      s.train.insert(s.train.end(), members.begin() + t, members.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    plan.push_back(std::move(s));
  }
  return plan;
}

std::vector<Split> stratified_folds(std::span<const int> labels, std::size_t n_classes,
                                    std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  auto groups = by_class(labels, n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    if (!groups[c].empty() && groups[c].size() < k)
      throw DataError("class " + std::to_string(c) + " has fewer samples than folds");
  Rng rng(derive_seed(seed, "folds"));
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t deal = 0;
  for (auto& members : groups) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) fold_of[i] = deal++ % k;
  }
  std::vector<Split> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
  return folds;
}

}  // namespace rulemine::eval
