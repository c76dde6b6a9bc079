#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rulemine/matrix.hpp"

namespace rulemine::learn {

enum class LinearKind { LogisticL1, LogisticL2, LinearSvm };
enum class SvmLoss { Hinge, SquaredHinge };

/// One-vs-rest linear scorer: score_k(x) = weights.row(k) . x + intercepts[k].
struct LinearModel {
  LinearKind kind = LinearKind::LogisticL2;
  SvmLoss loss = SvmLoss::SquaredHinge;  // LinearSvm only
  double C = 1.0;
  Matrix weights;  // n_classes x n_features
  std::vector<double> intercepts;
  std::vector<std::size_t> iterations;  // per task
  std::vector<bool> converged;          // per task

  std::size_t n_classes() const { return weights.rows(); }
  std::size_t n_features() const { return weights.cols(); }
};

struct OptimizerBudget {
  std::size_t max_iterations = 2000;  // full passes (FISTA iterations / SGD epochs)
  double tolerance = 1e-6;            // stop when max |parameter change| < tolerance
};

// ---- Logistic regression -------------------------------------------------
//
// Each one-vs-rest task minimizes
//   sum_i s_i log(1 + exp(-t_i (w.x_i + b))) + (1/C) R(w),
// with t_i = +-1, s_i the sample weight, R = ||w||^2 / 2 (L2) or ||w||_1
// (L1). The intercept is not penalized. Solved by accelerated proximal
// gradient (FISTA with adaptive restart), soft-thresholding for L1.

LinearModel train_logreg(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                         LinearKind penalty, double C, std::span<const double> sample_weights,
                         const OptimizerBudget& budget = {});

/// Objective of one binary task, the full penalty included.
double logistic_objective(const Matrix& X, std::span<const double> targets,
                          std::span<const double> sample_weights, std::span<const double> w,
                          double b, LinearKind penalty, double C);

/// Gradient of the smooth part (weighted loss, plus the L2 term for L2).
/// Returns the w-gradient; the intercept derivative goes to grad_b.
std::vector<double> logistic_gradient(const Matrix& X, std::span<const double> targets,
                                      std::span<const double> sample_weights,
                                      std::span<const double> w, double b, LinearKind penalty,
                                      double C, double& grad_b);

// ---- Linear SVM ------------------------------------------------------------
//
// Each task minimizes ||w||^2 / 2 + C sum_i s_i l(t_i (w.x_i + b)) with
// l(m) = max(0, 1 - m) (Hinge) or max(0, 1 - m)^2 (SquaredHinge), the bias
// carried as an extra unit feature (so it is lightly regularized).
// Solved in the primal by the Pegasos stochastic subgradient method with
// iterate averaging; one epoch is one shuffled pass over the samples.

struct SvmTrace {
  std::vector<double> objective;  // objective of the averaged iterate per epoch, task 0
};

LinearModel train_linear_svm(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                             double C, std::span<const double> sample_weights, std::uint64_t seed,
                             SvmLoss loss = SvmLoss::SquaredHinge,
                             const OptimizerBudget& budget = {}, SvmTrace* trace = nullptr);

double svm_objective(const Matrix& X, std::span<const double> targets,
                     std::span<const double> sample_weights, std::span<const double> w, double b,
                     double C, SvmLoss loss);

Matrix linear_decision_values(const LinearModel& model, const Matrix& X);

}  // namespace rulemine::learn
