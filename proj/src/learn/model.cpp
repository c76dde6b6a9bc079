#include "rulemine/learn/model.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "rulemine/error.hpp"

namespace rulemine::learn {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()},
          {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.data().size()) throw DataError("model matrix has the wrong size");
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

const char* linear_kind_name(LinearKind k) {
  switch (k) {
    case LinearKind::LogisticL1: return "logistic_l1";
    case LinearKind::LogisticL2: return "logistic_l2";
    case LinearKind::LinearSvm: return "linear_svm";
  }
  return "?";
}

LinearKind linear_kind_from(const std::string& s) {
  if (s == "logistic_l1") return LinearKind::LogisticL1;
  if (s == "logistic_l2") return LinearKind::LogisticL2;
  if (s == "linear_svm") return LinearKind::LinearSvm;
  throw DataError("unknown linear model kind '" + s + "'");
}

json tree_json(const TreeModel& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_class, n.n_samples});
  std::vector<int> kinds;
  for (auto k : t.kinds) kinds.push_back(k == ColumnKind::Ordinal ? 0 : 1);
  return {{"n_classes", t.n_classes}, {"kinds", kinds}, {"nodes", nodes}};
}

TreeModel tree_from(const json& j) {
  TreeModel t;
  t.n_classes = j.at("n_classes").get<std::size_t>();
  for (int k : j.at("kinds").get<std::vector<int>>())
    t.kinds.push_back(k == 0 ? ColumnKind::Ordinal : ColumnKind::Categorical);
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.feature = n.at(0).get<int>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<int>();
    node.right = n.at(3).get<int>();
    node.leaf_class = n.at(4).get<int>();
    node.n_samples = n.at(5).get<std::size_t>();
    t.nodes.push_back(node);
  }
  const int count = static_cast<int>(t.nodes.size());
  if (count == 0) throw DataError("tree has no nodes");
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && (n.feature >= static_cast<int>(t.kinds.size()) || n.left <= 0 ||
                         n.right <= 0 || n.left >= count || n.right >= count))
      throw DataError("tree node references are out of range");
  return t;
}

json to_json(const Model& model) {
  json j = {{"format", "rulemine.model"}, {"version", 1}};
  std::visit(overloaded{
                 [&](const LinearModel& m) {
                   j["kind"] = "linear";
                   j["penalty"] = linear_kind_name(m.kind);
                   if (m.kind == LinearKind::LinearSvm)
                     j["loss"] = m.loss == SvmLoss::Hinge ? "hinge" : "squared_hinge";
                   j["C"] = m.C;
                   j["weights"] = matrix_json(m.weights);
                   j["intercepts"] = m.intercepts;
                   j["iterations"] = m.iterations;
                   j["converged"] = m.converged;
                 },
                 [&](const KernelModel& m) {
                   j["kind"] = "rbf_svm";
                   j["C"] = m.C;
                   j["gamma"] = m.gamma;
                   j["support"] = matrix_json(m.support);
                   j["coefs"] = m.coefs;
                   j["intercepts"] = m.intercepts;
                   j["bounds"] = m.bounds;
                   j["iterations"] = m.iterations;
                 },
                 [&](const TreeModel& m) {
                   j["kind"] = "tree";
                   j["tree"] = tree_json(m);
                 },
                 [&](const ForestModel& m) {
                   j["kind"] = "forest";
                   j["n_classes"] = m.n_classes;
                   json trees = json::array();
                   for (const auto& t : m.trees) trees.push_back(tree_json(t));
                   j["trees"] = trees;
                   j["training_indices"] = m.training_indices;
                 },
             },
             model);
  return j;
}

Model from_json(const json& j) {
  if (j.value("format", "") != "rulemine.model") throw DataError("not a rulemine model file");
  if (j.value("version", 0) != 1) throw DataError("unsupported model version");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    LinearModel m;
    m.kind = linear_kind_from(j.at("penalty").get<std::string>());
    if (m.kind == LinearKind::LinearSvm) {
      const auto loss = j.at("loss").get<std::string>();
      if (loss != "hinge" && loss != "squared_hinge") throw DataError("unknown SVM loss " + loss);
      m.loss = loss == "hinge" ? SvmLoss::Hinge : SvmLoss::SquaredHinge;
    }
    m.C = j.at("C").get<double>();
    m.weights = matrix_from(j.at("weights"));
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.iterations = j.at("iterations").get<std::vector<std::size_t>>();
    m.converged = j.at("converged").get<std::vector<bool>>();
    if (m.intercepts.size() != m.weights.rows()) throw DataError("intercept count mismatch");
    return m;
  }
  if (kind == "rbf_svm") {
    KernelModel m;
    m.C = j.at("C").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.support = matrix_from(j.at("support"));
    m.coefs = j.at("coefs").get<std::vector<std::vector<double>>>();
    m.intercepts = j.at("intercepts").get<std::vector<double>>();
    m.bounds = j.at("bounds").get<std::vector<double>>();
    m.iterations = j.at("iterations").get<std::vector<std::size_t>>();
    if (m.intercepts.size() != m.coefs.size()) throw DataError("intercept count mismatch");
    for (const auto& c : m.coefs)
      if (c.size() != m.support.rows()) throw DataError("coefficient count mismatch");
    return m;
  }
  if (kind == "tree") return tree_from(j.at("tree"));
  if (kind == "forest") {
    ForestModel m;
    m.n_classes = j.at("n_classes").get<std::size_t>();
    for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
    m.training_indices = j.at("training_indices").get<std::vector<std::vector<std::size_t>>>();
    return m;
  }
  throw DataError("unknown model kind '" + kind + "'");
}

}  // namespace

std::size_t n_features(const Model& model) {
  return std::visit([](const auto& m) { return m.n_features(); }, model);
}

std::size_t n_classes(const Model& model) {
  return std::visit(
      overloaded{[](const TreeModel& m) { return m.n_classes; },
                 [](const ForestModel& m) { return m.n_classes; },
                 [](const auto& m) { return m.n_classes(); }},
      model);
}

Matrix decision_values(const Model& model, const Matrix& X) {
  if (X.cols() != n_features(model))
    throw DataError("model expects " + std::to_string(n_features(model)) + " columns, got " +
                    std::to_string(X.cols()));
  return std::visit(
      overloaded{
          [&](const LinearModel& m) { return linear_decision_values(m, X); },
          [&](const KernelModel& m) { return kernel_decision_values(m, X); },
          [&](const TreeModel& m) {
            Matrix out(X.rows(), m.n_classes);
            for (std::size_t i = 0; i < X.rows(); ++i) out(i, m.predict_row(X.row(i))) = 1.0;
            return out;
          },
          [&](const ForestModel& m) {
            Matrix out(X.rows(), m.n_classes);
            for (std::size_t i = 0; i < X.rows(); ++i) {
              auto v = m.votes(X.row(i));
              for (std::size_t k = 0; k < v.size(); ++k) out(i, k) = static_cast<double>(v[k]);
            }
            return out;
          },
      },
      model);
}

std::vector<int> predict(const Model& model, const Matrix& X) {
  Matrix d = decision_values(model, X);
  std::vector<int> out(X.rows(), 0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    int best = 0;
    for (std::size_t k = 1; k < d.cols(); ++k)
      if (d(i, k) > d(i, best)) best = static_cast<int>(k);
    out[i] = best;
  }
  return out;
}

void save_model(const Model& model, std::ostream& out) { out << to_json(model).dump() << '\n'; }

Model load_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace rulemine::learn
