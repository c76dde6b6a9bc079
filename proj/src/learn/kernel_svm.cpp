#include "rulemine/learn/kernel_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rulemine/error.hpp"
#include "rulemine/learn/class_weights.hpp"
#include "rulemine/simd/kernels.hpp"

namespace rulemine::learn {
namespace {

constexpr double kTau = 1e-12;

struct DualResult {
  std::vector<double> alpha;
  double bias = 0.0;
  std::size_t iterations = 0;
};

DualResult smo(const Matrix& K, std::span<const double> t, std::span<const double> bound,
               const SmoOptions& options) {
  const std::size_t n = t.size();
  std::vector<double> alpha(n, 0.0), G(n, -1.0);
  const std::size_t max_iter = options.max_iterations ? options.max_iterations : 2000 * n;
  const double inf = std::numeric_limits<double>::infinity();

  auto up = [&](std::size_t i) { return t[i] > 0 ? alpha[i] < bound[i] : alpha[i] > 0; };
  auto low = [&](std::size_t i) { return t[i] > 0 ? alpha[i] > 0 : alpha[i] < bound[i]; };

  DualResult res;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -inf;
    std::size_t i = n;
    for (std::size_t k = 0; k < n; ++k)
      if (up(k) && -t[k] * G[k] > gmax) {
        gmax = -t[k] * G[k];
        i = k;
      }
    if (i == n) break;
    double gmin = inf, best = inf;
    std::size_t j = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (!low(k)) continue;
      double v = -t[k] * G[k];
      gmin = std::min(gmin, v);
      double b = gmax - v;
      if (b > 0) {
        double a = K(i, i) + K(k, k) - 2.0 * K(i, k);
        if (a <= 0) a = kTau;
        double obj = -(b * b) / a;
        if (obj < best) {
          best = obj;
          j = k;
        }
      }
    }
    if (j == n || gmax - gmin < options.tolerance) break;

    const double Ci = bound[i], Cj = bound[j];
    const double ai = alpha[i], aj = alpha[j];
    if (t[i] != t[j]) {
      double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
      if (quad <= 0) quad = kTau;
      double delta = (-G[i] - G[j]) / quad;
      double diff = ai - aj;
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > Ci - Cj) {
        if (alpha[i] > Ci) {
          alpha[i] = Ci;
          alpha[j] = Ci - diff;
        }
      } else if (alpha[j] > Cj) {
        alpha[j] = Cj;
        alpha[i] = Cj + diff;
      }
    } else {
      double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
      if (quad <= 0) quad = kTau;
      double delta = (G[i] - G[j]) / quad;
      double sum = ai + aj;
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > Ci) {
        if (alpha[i] > Ci) {
          alpha[i] = Ci;
          alpha[j] = sum - Ci;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > Cj) {
        if (alpha[j] > Cj) {
          alpha[j] = Cj;
          alpha[i] = sum - Cj;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    double di = alpha[i] - ai, dj = alpha[j] - aj;
    for (std::size_t k = 0; k < n; ++k)
      G[k] += t[k] * (t[i] * K(i, k) * di + t[j] * K(j, k) * dj);
  }

  double ub = inf, lb = -inf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double yg = t[k] * G[k];
    if (alpha[k] >= bound[k]) {
      if (t[k] < 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (alpha[k] <= 0) {
      if (t[k] > 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho = n_free ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  if (!std::isfinite(rho)) rho = 0.0;
  res.alpha = std::move(alpha);
  res.bias = -rho;
  res.iterations = iter;
  return res;
}

}  // namespace

double default_gamma(const Matrix& X) {
  auto d = X.data();
  if (d.empty() || X.cols() == 0) return 1.0;
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double var = 0.0;
  for (double v : d) var += (v - mean) * (v - mean);
  var /= static_cast<double>(d.size());
  if (!(var > 0) || !std::isfinite(var)) return 1.0;
  return 1.0 / (static_cast<double>(X.cols()) * var);
}

KernelModel train_rbf_svm(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                          double C, double gamma, std::span<const double> sample_weights,
                          const SmoOptions& options) {
  if (X.rows() != y.size()) throw DataError("feature matrix and labels differ in length");
  if (!sample_weights.empty() && sample_weights.size() != y.size())
    throw DataError("sample weights and labels differ in length");
  if (!(C > 0) || !std::isfinite(C)) throw ConfigError("C must be a positive finite number");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  check_labels(y, n_classes);
  const std::size_t n = X.rows();

  Matrix K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j)
      K(i, j) = K(j, i) = std::exp(-gamma * simd::squared_distance(X.row(i), X.row(j)));
  }
  std::vector<double> bound(n, C);
  if (!sample_weights.empty())
    for (std::size_t i = 0; i < n; ++i) bound[i] = C * sample_weights[i];

  std::vector<DualResult> tasks;
  for (std::size_t k = 0; k < n_classes; ++k) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = y[i] == static_cast<int>(k) ? 1.0 : -1.0;
    auto r = smo(K, t, bound, options);
    for (std::size_t i = 0; i < n; ++i) r.alpha[i] *= t[i];
    tasks.push_back(std::move(r));
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& task : tasks)
      if (task.alpha[i] != 0.0) {
        keep.push_back(i);
        break;
      }

  KernelModel model;
  model.C = C;
  model.gamma = gamma;
  model.support = X.select_rows(keep);
  for (std::size_t i : keep) model.bounds.push_back(bound[i]);
  for (auto& task : tasks) {
    std::vector<double> coef;
    for (std::size_t i : keep) coef.push_back(task.alpha[i]);
    model.coefs.push_back(std::move(coef));
    model.intercepts.push_back(task.bias);
    model.iterations.push_back(task.iterations);
  }
  return model;
}

Matrix kernel_decision_values(const KernelModel& model, const Matrix& X) {
  if (X.cols() != model.n_features())
    throw DataError("model expects " + std::to_string(model.n_features()) + " columns, got " +
                    std::to_string(X.cols()));
  const std::size_t m = model.support.rows();
  Matrix out(X.rows(), model.n_classes());
  std::vector<double> k(m);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t s = 0; s < m; ++s)
      k[s] = std::exp(-model.gamma * simd::squared_distance(X.row(i), model.support.row(s)));
    for (std::size_t c = 0; c < model.n_classes(); ++c)
      out(i, c) = simd::dot(k, model.coefs[c]) + model.intercepts[c];
  }
  return out;
}

}  // namespace rulemine::learn
