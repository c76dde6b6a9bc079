#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rulemine/matrix.hpp"

namespace rulemine::learn {

/// One-vs-rest RBF-kernel SVM, K(a, b) = exp(-gamma ||a - b||^2).
struct KernelModel {
  double C = 1.0;
  double gamma = 1.0;
  Matrix support;                          // stored training rows
  std::vector<std::vector<double>> coefs;  // per task: alpha_i t_i over stored rows
  std::vector<double> intercepts;          // per task
  std::vector<double> bounds;              // per stored row: C * sample weight
  std::vector<std::size_t> iterations;

  std::size_t n_classes() const { return coefs.size(); }
  std::size_t n_features() const { return support.cols(); }
};

struct SmoOptions {
  double tolerance = 1e-3;          // KKT violation stopping threshold
  std::size_t max_iterations = 0;   // 0: 2000 * n
};

/// 1 / (n_features * variance of all entries); 1 when that is undefined.
double default_gamma(const Matrix& X);

/// Dual problem per task, solved by SMO with second-order working-set
/// selection: min 1/2 a'Qa - sum a, 0 <= a_i <= C s_i, sum t_i a_i = 0.
KernelModel train_rbf_svm(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                          double C, double gamma, std::span<const double> sample_weights,
                          const SmoOptions& options = {});

Matrix kernel_decision_values(const KernelModel& model, const Matrix& X);

}  // namespace rulemine::learn
