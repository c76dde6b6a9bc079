#include "rulemine/learn/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rulemine/error.hpp"
#include "rulemine/learn/class_weights.hpp"
#include "rulemine/rng.hpp"
#include "rulemine/simd/kernels.hpp"

namespace rulemine::learn {
namespace {

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) {
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m >= 0) {
    double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

void check_inputs(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                  std::span<const double> sample_weights, double C) {
  if (X.rows() != y.size()) throw DataError("feature matrix and labels differ in length");
  if (!sample_weights.empty() && sample_weights.size() != y.size())
    throw DataError("sample weights and labels differ in length");
  if (!(C > 0) || !std::isfinite(C)) throw ConfigError("C must be a positive finite number");
  check_labels(y, n_classes);
}

std::vector<double> weights_or_ones(std::span<const double> w, std::size_t n) {
  if (w.empty()) return std::vector<double>(n, 1.0);
  return {w.begin(), w.end()};
}

std::vector<double> task_targets(std::span<const int> y, int k) {
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) t[i] = y[i] == k ? 1.0 : -1.0;
  return t;
}

void margins(const Matrix& X, std::span<const double> w, double b, std::vector<double>& z) {
  z.resize(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) z[i] = simd::dot(X.row(i), w) + b;
}

double smooth_value(const Matrix& X, std::span<const double> t, std::span<const double> s,
                    std::span<const double> w, double b, LinearKind penalty, double C,
                    std::vector<double>& z) {
  margins(X, w, b, z);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += s[i] * log1p_exp_neg(t[i] * z[i]);
  if (penalty == LinearKind::LogisticL2) loss += 0.5 / C * simd::dot(w, w);
  return loss;
}

// Gradient of the smooth part from precomputed margins.
void smooth_gradient(const Matrix& X, std::span<const double> t, std::span<const double> s,
                     std::span<const double> w, LinearKind penalty, double C,
                     const std::vector<double>& z, std::vector<double>& gw, double& gb) {
  gw.assign(X.cols(), 0.0);
  gb = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double d = -s[i] * t[i] * sigmoid_neg(t[i] * z[i]);
    if (d == 0.0) continue;
    simd::axpy(d, X.row(i), gw);
    gb += d;
  }
  if (penalty == LinearKind::LogisticL2) simd::axpy(1.0 / C, w, gw);
}

// Largest eigenvalue of A' S A with A = [X 1], by power iteration.
double spectral_bound(const Matrix& X, std::span<const double> s) {
  const std::size_t p = X.cols();
  std::vector<double> v(p + 1, 1.0), u(p + 1);
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    double norm = std::sqrt(simd::dot(v, v));
    if (norm == 0) return 0.0;
    simd::scale(1.0 / norm, v);
    std::fill(u.begin(), u.end(), 0.0);
    std::span<const double> vw(v.data(), p);
    std::span<double> uw(u.data(), p);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      double a = s[i] * (simd::dot(X.row(i), vw) + v[p]);
      simd::axpy(a, X.row(i), uw);
      u[p] += a;
    }
    lambda = simd::dot(u, v);
    v.swap(u);
  }
  return lambda;
}

struct TaskResult {
  std::vector<double> w;
  double b = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

TaskResult fista(const Matrix& X, std::span<const double> t, std::span<const double> s,
                 LinearKind penalty, double C, const OptimizerBudget& budget) {
  const std::size_t p = X.cols();
  const bool l1 = penalty == LinearKind::LogisticL1;
  double L = 0.25 * spectral_bound(X, s) * 1.05 + (l1 ? 0.0 : 1.0 / C);
  if (!(L > 0)) L = 1.0;

  std::vector<double> w(p, 0.0), w_prev(p, 0.0), yw(p), gw, nw(p), z;
  double b = 0.0, b_prev = 0.0, yb = 0.0, gb = 0.0, nb = 0.0;
  double tk = 1.0;
  TaskResult result;
  for (std::size_t it = 1; it <= budget.max_iterations; ++it) {
    double tk_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    double beta = (tk - 1.0) / tk_next;
    for (std::size_t j = 0; j < p; ++j) yw[j] = w[j] + beta * (w[j] - w_prev[j]);
    yb = b + beta * (b - b_prev);

    double fy = smooth_value(X, t, s, yw, yb, penalty, C, z);
    smooth_gradient(X, t, s, yw, penalty, C, z, gw, gb);
    for (;;) {
      for (std::size_t j = 0; j < p; ++j) {
        double v = yw[j] - gw[j] / L;
        if (l1) {
          double thr = 1.0 / (C * L);
          v = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
        }
        nw[j] = v;
      }
      nb = yb - gb / L;
      double fn = smooth_value(X, t, s, nw, nb, penalty, C, z);
      double lin = (nb - yb) * gb, quad = (nb - yb) * (nb - yb);
      for (std::size_t j = 0; j < p; ++j) {
        double d = nw[j] - yw[j];
        lin += d * gw[j];
        quad += d * d;
      }
      if (fn <= fy + lin + 0.5 * L * quad + 1e-12 * std::abs(fy)) break;
      L *= 2.0;
    }

    // Adaptive restart when the momentum points uphill.
    double restart = (yb - nb) * (nb - b);
    double delta = std::abs(nb - b);
    for (std::size_t j = 0; j < p; ++j) {
      restart += (yw[j] - nw[j]) * (nw[j] - w[j]);
      delta = std::max(delta, std::abs(nw[j] - w[j]));
    }
    tk = restart > 0 ? 1.0 : tk_next;
    w_prev.swap(w);
    w.swap(nw);
    b_prev = b;
    b = nb;
    result.iterations = it;
    if (delta < budget.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.w = std::move(w);
  result.b = b;
  return result;
}

TaskResult pegasos(const Matrix& X, std::span<const double> t, std::span<const double> s,
                   double C, SvmLoss loss, std::uint64_t seed, const OptimizerBudget& budget,
                   std::vector<double>* trace) {
  const std::size_t n = X.rows(), p = X.cols();
  const double lambda = 1.0 / (C * static_cast<double>(n));
  double radius = std::sqrt(2.0 * C * std::accumulate(s.begin(), s.end(), 0.0));

  // Squared hinge is smooth: cap the step at 1 / max_i L_i.
  double eta_max = std::numeric_limits<double>::infinity();
  if (loss == SvmLoss::SquaredHinge) {
    double L = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      L = std::max(L, 2.0 * s[i] * (simd::dot(X.row(i), X.row(i)) + 1.0));
    eta_max = 1.0 / (lambda + L);
  }

  // v = (w, b); the bias rides along as a unit feature.
  std::vector<double> v(p + 1, 0.0), avg(p + 1, 0.0), prev_avg(p + 1, 0.0);
  std::span<double> vw(v.data(), p);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);

  TaskResult result;
  std::size_t step = 0, averaged = 0;
  for (std::size_t epoch = 1; epoch <= budget.max_iterations; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++step;
      double eta = std::min(eta_max, 1.0 / (lambda * static_cast<double>(step)));
      double m = t[i] * (simd::dot(X.row(i), vw) + v[p]);
      double shrink = 1.0 - eta * lambda;
      if (shrink == 0.0)
        std::fill(v.begin(), v.end(), 0.0);
      else
        simd::scale(shrink, v);
      if (m < 1.0) {
        double g = eta * s[i] * t[i] * (loss == SvmLoss::SquaredHinge ? 2.0 * (1.0 - m) : 1.0);
        simd::axpy(g, X.row(i), vw);
        v[p] += g;
      }
      double norm = std::sqrt(simd::dot(v, v));
      if (norm > radius) simd::scale(radius / norm, v);
      // Averaging starts after the first epoch unless there is only one.
      if (epoch > 1 || budget.max_iterations == 1) {
        ++averaged;
        double r = 1.0 / static_cast<double>(averaged);
        for (std::size_t j = 0; j <= p; ++j) avg[j] += r * (v[j] - avg[j]);
      }
    }
    if (averaged == 0) continue;
    if (trace)
      trace->push_back(
          svm_objective(X, t, s, std::span<const double>(avg.data(), p), avg[p], C, loss));
    double delta = 0.0;
    for (std::size_t j = 0; j <= p; ++j) delta = std::max(delta, std::abs(avg[j] - prev_avg[j]));
    prev_avg = avg;
    result.iterations = epoch;
    if (epoch > 2 && delta < budget.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.b = avg[p];
  avg.resize(p);
  result.w = std::move(avg);
  return result;
}

LinearModel assemble(LinearKind kind, double C, std::size_t n_classes, std::size_t p,
                     std::vector<TaskResult>& tasks) {
  LinearModel model;
  model.kind = kind;
  model.C = C;
  model.weights = Matrix(n_classes, p);
  for (std::size_t k = 0; k < n_classes; ++k) {
    std::copy(tasks[k].w.begin(), tasks[k].w.end(), model.weights.row(k).begin());
    model.intercepts.push_back(tasks[k].b);
    model.iterations.push_back(tasks[k].iterations);
    model.converged.push_back(tasks[k].converged);
  }
  return model;
}

}  // namespace

double logistic_objective(const Matrix& X, std::span<const double> targets,
                          std::span<const double> sample_weights, std::span<const double> w,
                          double b, LinearKind penalty, double C) {
  std::vector<double> z;
  double v = smooth_value(X, targets, sample_weights, w, b, penalty, C, z);
  if (penalty == LinearKind::LogisticL1)
    for (double x : w) v += std::abs(x) / C;
  return v;
}

std::vector<double> logistic_gradient(const Matrix& X, std::span<const double> targets,
                                      std::span<const double> sample_weights,
                                      std::span<const double> w, double b, LinearKind penalty,
                                      double C, double& grad_b) {
  std::vector<double> z, g;
  margins(X, w, b, z);
  smooth_gradient(X, targets, sample_weights, w, penalty, C, z, g, grad_b);
  return g;
}

double svm_objective(const Matrix& X, std::span<const double> targets,
                     std::span<const double> sample_weights, std::span<const double> w, double b,
                     double C, SvmLoss loss) {
  double v = 0.5 * (simd::dot(w, w) + b * b);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double m = targets[i] * (simd::dot(X.row(i), w) + b);
    if (m < 1.0) {
      double l = 1.0 - m;
      v += C * sample_weights[i] * (loss == SvmLoss::SquaredHinge ? l * l : l);
    }
  }
  return v;
}

LinearModel train_logreg(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                         LinearKind penalty, double C, std::span<const double> sample_weights,
                         const OptimizerBudget& budget) {
  if (penalty == LinearKind::LinearSvm) throw ConfigError("train_logreg needs an L1 or L2 penalty");
  check_inputs(X, y, n_classes, sample_weights, C);
  auto s = weights_or_ones(sample_weights, y.size());
  std::vector<TaskResult> tasks;
  for (std::size_t k = 0; k < n_classes; ++k) {
    auto t = task_targets(y, static_cast<int>(k));
    tasks.push_back(fista(X, t, s, penalty, C, budget));
  }
  return assemble(penalty, C, n_classes, X.cols(), tasks);
}

LinearModel train_linear_svm(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                             double C, std::span<const double> sample_weights, std::uint64_t seed,
                             SvmLoss loss, const OptimizerBudget& budget, SvmTrace* trace) {
  check_inputs(X, y, n_classes, sample_weights, C);
  if (budget.max_iterations == 0) throw ConfigError("epoch budget must be positive");
  auto s = weights_or_ones(sample_weights, y.size());
  std::vector<TaskResult> tasks;
  for (std::size_t k = 0; k < n_classes; ++k) {
    auto t = task_targets(y, static_cast<int>(k));
    std::vector<double>* tr = (trace && k == 0) ? &trace->objective : nullptr;
    tasks.push_back(pegasos(X, t, s, C, loss, derive_seed(seed, "pegasos", {k}), budget, tr));
  }
  auto model = assemble(LinearKind::LinearSvm, C, n_classes, X.cols(), tasks);
  model.loss = loss;
  return model;
}

Matrix linear_decision_values(const LinearModel& model, const Matrix& X) {
  if (X.cols() != model.n_features())
    throw DataError("model expects " + std::to_string(model.n_features()) + " columns, got " +
                    std::to_string(X.cols()));
  Matrix out(X.rows(), model.n_classes());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t k = 0; k < model.n_classes(); ++k)
      out(i, k) = simd::dot(X.row(i), model.weights.row(k)) + model.intercepts[k];
  return out;
}

}  // namespace rulemine::learn
