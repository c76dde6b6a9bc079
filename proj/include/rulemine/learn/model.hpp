#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "rulemine/learn/kernel_svm.hpp"
#include "rulemine/learn/linear.hpp"
#include "rulemine/learn/tree.hpp"

namespace rulemine::learn {

using Model = std::variant<LinearModel, KernelModel, TreeModel, ForestModel>;

std::size_t n_features(const Model& model);
std::size_t n_classes(const Model& model);

/// n x n_classes one-vs-rest scores (vote counts for forests, a one-hot
/// leaf indicator for single trees). Throws DataError on a column mismatch.
Matrix decision_values(const Model& model, const Matrix& X);

/// Row-wise argmax of the decision values, ties to the lowest class.
std::vector<int> predict(const Model& model, const Matrix& X);

// Versioned JSON document {"format":"rulemine.model","version":1,"kind":...}.
// Doubles round-trip exactly, so predictions survive a save/load cycle.
void save_model(const Model& model, std::ostream& out);
Model load_model(std::istream& in);

}  // namespace rulemine::learn
