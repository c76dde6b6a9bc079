#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rulemine/alt/tree_rules.hpp"
#include "rulemine/data/synthetic.hpp"
#include "rulemine/error.hpp"
#include "rulemine/learn/class_weights.hpp"
#include "rulemine/learn/kernel_svm.hpp"
#include "rulemine/learn/linear.hpp"
#include "rulemine/learn/model.hpp"
#include "rulemine/learn/tree.hpp"
#include "rulemine/rng.hpp"
#include "test_util.hpp"

using namespace rulemine;
using namespace rulemine::learn;

namespace {

// Forty points on two interleaved curves with three flipped labels.
Matrix curve_X() {
  Matrix X(40, 2);
  for (std::size_t i = 0; i < 40; ++i) {
    X(i, 0) = std::sin(1.3 * static_cast<double>(i));
    X(i, 1) = std::cos(0.7 * static_cast<double>(i)) + 0.05 * static_cast<double>(i % 5);
  }
  return X;
}

std::vector<int> curve_y() {
  return {1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0,
          1, 1, 0, 0, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 1};
}

std::vector<double> targets(std::span<const int> y, int cls) {
  std::vector<double> t;
  for (int v : y) t.push_back(v == cls ? 1.0 : -1.0);
  return t;
}

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t p) {
  Matrix X(n, p);
  for (auto& v : X.data()) v = rng.uniform() * 4.0 - 2.0;
  return X;
}

std::vector<int> linear_labels(const Matrix& X, std::size_t K) {
  std::vector<int> y;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < X.cols(); ++j) s += (j % 2 ? -1.0 : 1.0) * X(i, j);
    int c = static_cast<int>(std::floor((s + 3.0) / 6.0 * static_cast<double>(K)));
    y.push_back(std::clamp(c, 0, static_cast<int>(K) - 1));
  }
  return y;
}

double accuracy(const Model& m, const Matrix& X, std::span<const int> y) {
  auto p = predict(m, X);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += p[i] == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

const Matrix kXor = test::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
const std::vector<int> kXorY = {0, 0, 1, 1};

}  // namespace

TEST_SUITE("logistic") {
  TEST_CASE("gradient matches central differences") {
    Rng rng(derive_seed(1, "gradcheck"));
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 5 + rng.below(30), p = 1 + rng.below(6);
      auto X = random_matrix(rng, n, p);
      std::vector<double> t(n), s(n), w(p);
      for (std::size_t i = 0; i < n; ++i) {
        t[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
        s[i] = 0.2 + rng.uniform();
      }
      for (auto& v : w) v = rng.uniform() * 2.0 - 1.0;
      double b = rng.uniform() - 0.5;
      const double C = 0.1 + rng.uniform() * 10.0;
      const auto penalty = rep % 2 ? LinearKind::LogisticL1 : LinearKind::LogisticL2;
      // The smooth part only: the L1 term is removed from the objective.
      auto smooth = [&](std::span<const double> ww, double bb) {
        double f = logistic_objective(X, t, s, ww, bb, penalty, C);
        if (penalty == LinearKind::LogisticL1)
          for (double v : ww) f -= std::abs(v) / C;
        return f;
      };
      double gb = 0;
      auto g = logistic_gradient(X, t, s, w, b, penalty, C, gb);
      const double h = 1e-6;
      std::vector<double> num(p + 1), ana(g);
      ana.push_back(gb);
      for (std::size_t j = 0; j <= p; ++j) {
        auto wp = w, wm = w;
        double bp = b, bm = b;
        if (j < p) {
          wp[j] += h;
          wm[j] -= h;
        } else {
          bp += h;
          bm -= h;
        }
        num[j] = (smooth(wp, bp) - smooth(wm, bm)) / (2 * h);
      }
      double diff = 0, scale = 0;
      for (std::size_t j = 0; j <= p; ++j) {
        diff += (num[j] - ana[j]) * (num[j] - ana[j]);
        scale += ana[j] * ana[j];
      }
      CHECK(std::sqrt(diff) / std::max(1e-12, std::sqrt(scale)) < 1e-5);
    }
  }

  TEST_CASE("L2 solution matches an independent reference optimum") {
    auto X = curve_X();
    auto y = curve_y();
    OptimizerBudget budget{20000, 1e-10};
    auto m = train_logreg(X, y, 2, LinearKind::LogisticL2, 2.0, {}, budget);
    CHECK(m.weights(1, 0) == doctest::Approx(2.355993957730869).epsilon(1e-4));
    CHECK(m.weights(1, 1) == doctest::Approx(0.7022501086461238).epsilon(1e-4));
    CHECK(m.intercepts[1] == doctest::Approx(0.023164146404161246).epsilon(1e-3));
    std::vector<double> w(m.weights.row(1).begin(), m.weights.row(1).end()), s(40, 1.0);
    CHECK(logistic_objective(X, targets(y, 1), s, w, m.intercepts[1], LinearKind::LogisticL2, 2.0) ==
          doctest::Approx(17.120847934845376).epsilon(1e-8));
  }

  TEST_CASE("strong L1 penalty zeroes every weight") {
    Rng rng(2);
    auto X = random_matrix(rng, 60, 5);
    auto y = linear_labels(X, 3);
    auto m = train_logreg(X, y, 3, LinearKind::LogisticL1, 1e-6, {});
    for (double v : m.weights.data()) CHECK(v == 0.0);
  }

  TEST_CASE("L1 sparsity decreases with C") {
    Rng rng(3);
    auto X = random_matrix(rng, 80, 8);
    auto y = linear_labels(X, 2);
    auto nonzero = [&](double C) {
      auto m = train_logreg(X, y, 2, LinearKind::LogisticL1, C, {});
      return std::count_if(m.weights.data().begin(), m.weights.data().end(),
                           [](double v) { return v != 0.0; });
    };
    CHECK(nonzero(1e-3) <= nonzero(1e3));
    CHECK(nonzero(1e3) > 0);
  }

  TEST_CASE("integer sample weights equal duplicated samples") {
    Rng rng(4);
    auto X = random_matrix(rng, 30, 3);
    auto y = linear_labels(X, 2);
    std::vector<double> s(30, 1.0);
    std::vector<std::size_t> rows;
    std::vector<int> ydup;
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = 1.0 + static_cast<double>(i % 3);
      for (int k = 0; k < static_cast<int>(s[i]); ++k) {
        rows.push_back(i);
        ydup.push_back(y[i]);
      }
    }
    OptimizerBudget budget{20000, 1e-11};
    auto a = train_logreg(X, y, 2, LinearKind::LogisticL2, 1.0, s, budget);
    auto b = train_logreg(X.select_rows(rows), ydup, 2, LinearKind::LogisticL2, 1.0, {}, budget);
    for (std::size_t j = 0; j < a.weights.data().size(); ++j)
      CHECK(a.weights.data()[j] == doctest::Approx(b.weights.data()[j]).epsilon(1e-6));
  }
}

TEST_SUITE("linear_svm") {
  TEST_CASE("separable toy reaches zero training loss") {
    auto X = test::from_rows({{-2, -1}, {-1.5, -2}, {-3, -2}, {2, 1}, {1.5, 2.5}, {3, 2}});
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    for (auto loss : {SvmLoss::Hinge, SvmLoss::SquaredHinge}) {
      auto m = train_linear_svm(X, y, 2, 100.0, {}, 9, loss);
      auto t = targets(y, 1);
      for (std::size_t i = 0; i < 6; ++i) {
        double margin = t[i] * (m.weights(1, 0) * X(i, 0) + m.weights(1, 1) * X(i, 1) + m.intercepts[1]);
        CHECK(margin >= 0.99);
      }
      CHECK(accuracy(m, X, y) == 1.0);
    }
  }

  TEST_CASE("objective approaches an independent reference optimum") {
    auto X = curve_X();
    auto y = curve_y();
    std::vector<double> s(40, 1.0);
    auto t = targets(y, 1);
    struct Case {
      SvmLoss loss;
      double optimum;
    };
    for (auto c : {Case{SvmLoss::SquaredHinge, 19.857685368725292}, Case{SvmLoss::Hinge, 16.756869306486017}}) {
      auto m = train_linear_svm(X, y, 2, 1.0, {}, 11, c.loss);
      std::vector<double> w(m.weights.row(1).begin(), m.weights.row(1).end());
      double obj = svm_objective(X, t, s, w, m.intercepts[1], 1.0, c.loss);
      CHECK(obj >= c.optimum - 1e-6);
      CHECK(obj <= c.optimum * 1.01);
    }
  }

  TEST_CASE("averaged objective trace is non-increasing") {
    Rng rng(5);
    auto X = random_matrix(rng, 100, 4);
    auto y = linear_labels(X, 2);
    for (auto loss : {SvmLoss::Hinge, SvmLoss::SquaredHinge}) {
      SvmTrace trace;
      train_linear_svm(X, y, 2, 1.0, {}, 3, loss, OptimizerBudget{300, 0.0}, &trace);
      REQUIRE(trace.objective.size() > 10);
      // Stochastic steps leave ripples of order 1e-5 near the optimum.
      for (std::size_t e = 1; e < trace.objective.size(); ++e)
        CHECK(trace.objective[e] <= trace.objective[e - 1] * (1 + 1e-4));
      CHECK(trace.objective.back() < 0.8 * trace.objective.front());
    }
  }

  TEST_CASE("linear models cannot fit XOR") {
    CHECK(accuracy(train_linear_svm(kXor, kXorY, 2, 10.0, {}, 1), kXor, kXorY) <= 0.75);
    CHECK(accuracy(train_logreg(kXor, kXorY, 2, LinearKind::LogisticL2, 10.0, {}), kXor, kXorY) <= 0.75);
  }

  TEST_CASE("same seed, same model") {
    Rng rng(6);
    auto X = random_matrix(rng, 50, 3);
    auto y = linear_labels(X, 3);
    auto a = train_linear_svm(X, y, 3, 1.0, {}, 77);
    auto b = train_linear_svm(X, y, 3, 1.0, {}, 77);
    CHECK(a.weights == b.weights);
    CHECK(a.intercepts == b.intercepts);
  }
}

TEST_SUITE("rbf_svm") {
  TEST_CASE("RBF kernel separates XOR") {
    auto m = train_rbf_svm(kXor, kXorY, 2, 10.0, 1.0, {});
    CHECK(accuracy(m, kXor, kXorY) == 1.0);
  }

  TEST_CASE("decision values match an independent reference solver") {
    auto m = train_rbf_svm(curve_X(), curve_y(), 2, 10.0, 1.0, {}, SmoOptions{1e-6, 0});
    auto dv = decision_values(m, test::from_rows({{0.2, -0.3}, {-0.8, 0.5}, {0.9, 0.9}}));
    CHECK(dv(0, 1) == doctest::Approx(1.224587067874649).epsilon(1e-4));
    CHECK(dv(1, 1) == doctest::Approx(-1.8365488574303708).epsilon(1e-4));
    CHECK(dv(2, 1) == doctest::Approx(1.3913757065871732).epsilon(1e-4));
    CHECK(dv(0, 0) == doctest::Approx(-dv(0, 1)).epsilon(1e-4));
  }

  TEST_CASE("dual solution satisfies the box and equality constraints") {
    Rng rng(8);
    auto X = random_matrix(rng, 60, 3);
    auto y = linear_labels(X, 3);
    auto w = balanced_sample_weights(y, 3);
    auto m = train_rbf_svm(X, y, 3, 2.0, default_gamma(X), w);
    for (std::size_t k = 0; k < 3; ++k) {
      double sum = 0;
      for (std::size_t i = 0; i < m.coefs[k].size(); ++i) {
        CHECK(std::abs(m.coefs[k][i]) <= m.bounds[i] * (1 + 1e-12));
        sum += m.coefs[k][i];
      }
      CHECK(std::abs(sum) < 1e-9);
    }
  }

  TEST_CASE("default gamma") {
    auto X = test::from_rows({{0, 2}, {2, 0}});
    CHECK(default_gamma(X) == doctest::Approx(1.0 / (2 * 1.0)));
    CHECK(default_gamma(test::from_rows({{1, 1}, {1, 1}})) == 1.0);
  }
}

TEST_SUITE("trees") {
  TEST_CASE("CART fits noiseless synthetic data") {
    auto ds = data::generate_synthetic(500, 0.0, 21);
    Matrix X(ds.n_samples(), ds.n_features());
    for (std::size_t i = 0; i < X.rows(); ++i)
      for (std::size_t j = 0; j < X.cols(); ++j) X(i, j) = ds.value(i, j);
    std::vector<int> y(ds.labels().begin(), ds.labels().end());
    std::vector<ColumnKind> kinds = {ColumnKind::Ordinal, ColumnKind::Ordinal, ColumnKind::Categorical,
                                     ColumnKind::Categorical};
    auto tree = train_cart(X, y, 3, kinds, TreeParams{});
    CHECK(accuracy(tree, X, y) >= 0.99);
  }

  TEST_CASE("a single full-feature tree without bootstrap is CART") {
    Rng rng(9);
    auto X = random_matrix(rng, 80, 4);
    auto y = linear_labels(X, 3);
    std::vector<ColumnKind> kinds(4, ColumnKind::Ordinal);
    auto tree = train_cart(X, y, 3, kinds, TreeParams{2, 0});
    auto forest = train_forest(X, y, 3, kinds, ForestParams{1, 2, 4, false, 5});
    REQUIRE(forest.trees.size() == 1);
    CHECK(forest.trees[0].nodes == tree.nodes);
  }

  TEST_CASE("forest votes and determinism") {
    Rng rng(10);
    auto X = random_matrix(rng, 60, 5);
    auto y = linear_labels(X, 3);
    std::vector<ColumnKind> kinds(5, ColumnKind::Ordinal);
    ForestParams params{25, 1, 0, true, 123};
    auto a = train_forest(X, y, 3, kinds, params);
    auto b = train_forest(X, y, 3, kinds, params);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      auto v = a.votes(X.row(i));
      std::size_t total = 0;
      for (auto c : v) total += c;
      CHECK(total == 25);
      CHECK(v == b.votes(X.row(i)));
    }
    for (std::size_t t = 0; t < 25; ++t) CHECK(a.trees[t] == b.trees[t]);
  }

  TEST_CASE("integer weights equal duplicated samples") {
    Rng rng(12);
    auto X = random_matrix(rng, 40, 3);
    auto y = linear_labels(X, 2);
    std::vector<double> s(40);
    std::vector<std::size_t> rows;
    std::vector<int> ydup;
    for (std::size_t i = 0; i < 40; ++i) {
      s[i] = 1.0 + static_cast<double>(i % 2);
      for (int k = 0; k < static_cast<int>(s[i]); ++k) {
        rows.push_back(i);
        ydup.push_back(y[i]);
      }
    }
    std::vector<ColumnKind> kinds(3, ColumnKind::Ordinal);
    auto a = train_cart(X, y, 2, kinds, TreeParams{}, s);
    auto b = train_cart(X.select_rows(rows), ydup, 2, kinds, TreeParams{});
    Rng probe(13);
    auto Q = random_matrix(probe, 200, 3);
    CHECK(predict(a, Q) == predict(b, Q));
  }
}

TEST_SUITE("models") {
  TEST_CASE("all-zero linear model predicts class 0") {
    LinearModel m;
    m.weights = Matrix(3, 4);
    m.intercepts = {0, 0, 0};
    auto p = predict(m, Matrix(5, 4, 1.5));
    CHECK(p == std::vector<int>(5, 0));
  }

  TEST_CASE("predict is the argmax of decision values") {
    Rng rng(14);
    auto X = random_matrix(rng, 50, 3);
    auto y = linear_labels(X, 3);
    std::vector<ColumnKind> kinds(3, ColumnKind::Ordinal);
    std::vector<Model> models = {train_logreg(X, y, 3, LinearKind::LogisticL2, 1.0, {}),
                                 train_linear_svm(X, y, 3, 1.0, {}, 1),
                                 train_rbf_svm(X, y, 3, 1.0, 0.5, {}),
                                 train_cart(X, y, 3, kinds, TreeParams{}),
                                 train_forest(X, y, 3, kinds, ForestParams{10, 1, 0, true, 2})};
    for (const auto& m : models) {
      auto dv = decision_values(m, X);
      auto p = predict(m, X);
      for (std::size_t i = 0; i < X.rows(); ++i) {
        auto r = dv.row(i);
        CHECK(p[i] == std::max_element(r.begin(), r.end()) - r.begin());
      }
    }
  }

  TEST_CASE("save and load round trip exactly") {
    Rng rng(15);
    auto X = random_matrix(rng, 40, 3);
    auto y = linear_labels(X, 2);
    std::vector<ColumnKind> kinds = {ColumnKind::Ordinal, ColumnKind::Ordinal, ColumnKind::Categorical};
    for (auto& v : X.data()) v = std::round(v);
    std::vector<Model> models = {train_logreg(X, y, 2, LinearKind::LogisticL1, 1.0, {}),
                                 train_linear_svm(X, y, 2, 1.0, {}, 1, SvmLoss::Hinge),
                                 train_rbf_svm(X, y, 2, 1.0, 0.5, {}),
                                 train_cart(X, y, 2, kinds, TreeParams{}),
                                 train_forest(X, y, 2, kinds, ForestParams{5, 1, 0, true, 2})};
    for (const auto& m : models) {
      std::stringstream io;
      save_model(m, io);
      auto back = load_model(io);
      CHECK(back.index() == m.index());
      CHECK(decision_values(back, X) == decision_values(m, X));
    }
    std::istringstream bad("{\"format\":\"rulemine.model\",\"version\":99}");
    CHECK_THROWS_AS(load_model(bad), DataError);
  }

  TEST_CASE("column mismatch is rejected") {
    LinearModel m;
    m.weights = Matrix(2, 3);
    m.intercepts = {0, 0};
    CHECK_THROWS_AS(decision_values(m, Matrix(2, 4)), DataError);
  }

  TEST_CASE("balanced weights") {
    std::vector<int> y = {0, 0, 0, 1};
    auto w = balanced_class_weights(y, 3);
    CHECK(w[0] == doctest::Approx(4.0 / 9.0));
    CHECK(w[1] == doctest::Approx(4.0 / 3.0));
    CHECK(w[2] == 0.0);
    CHECK_THROWS(check_labels(std::vector<int>{1, 1}, 2));
  }
}
