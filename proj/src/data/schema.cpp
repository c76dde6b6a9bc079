#include "rulemine/data/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "rulemine/error.hpp"

namespace rulemine::data {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features, TargetSpec target)
    : features_(std::move(features)), target_(std::move(target)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) throw ConfigError("schema: empty feature name");
    if (!names.insert(f.name).second) throw ConfigError("schema: duplicate feature '" + f.name + "'");
    if (f.kind == FeatureKind::Categorical) {
      if (f.categories.size() < 2)
        throw ConfigError("schema: categorical feature '" + f.name + "' needs >= 2 categories");
      std::set<std::string> cats(f.categories.begin(), f.categories.end());
      if (cats.size() != f.categories.size())
        throw ConfigError("schema: repeated category in '" + f.name + "'");
    } else if (!f.categories.empty()) {
      throw ConfigError("schema: continuous feature '" + f.name + "' lists categories");
    }
  }
  if (target_.name.empty()) throw ConfigError("schema: missing target declaration");
  if (names.count(target_.name)) throw ConfigError("schema: target name clashes with a feature");
  if (target_.labels.size() < 2) throw ConfigError("schema: target needs >= 2 labels");
  std::set<std::string> labels(target_.labels.begin(), target_.labels.end());
  if (labels.size() != target_.labels.size()) throw ConfigError("schema: repeated class label");
}

FeatureSchema FeatureSchema::parse(std::string_view text) {
  std::vector<FeatureSpec> features;
  TargetSpec target;
  bool have_target = false;
  std::istringstream in{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string where = "schema line " + std::to_string(lineno) + ": ";
    if (toks[0] == "target") {
      if (have_target) throw ConfigError(where + "second target declaration");
      if (toks.size() < 2) throw ConfigError(where + "target needs a name");
      target.name = toks[1];
      target.labels.assign(toks.begin() + 2, toks.end());
      have_target = true;
    } else if (toks[0] == "feature") {
      if (toks.size() < 3) throw ConfigError(where + "expected 'feature <name> <kind> ...'");
      FeatureSpec spec{toks[1], FeatureKind::Continuous, {}};
      if (toks[2] == "continuous") {
        if (toks.size() > 3) throw ConfigError(where + "continuous feature takes no categories");
      } else if (toks[2] == "categorical") {
        spec.kind = FeatureKind::Categorical;
        spec.categories.assign(toks.begin() + 3, toks.end());
      } else {
        throw ConfigError(where + "unknown feature kind '" + toks[2] + "'");
      }
      features.push_back(std::move(spec));
    } else {
      throw ConfigError(where + "unknown declaration '" + toks[0] + "'");
    }
  }
  if (!have_target) throw ConfigError("schema: missing target declaration");
  return FeatureSchema(std::move(features), std::move(target));
}

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read schema file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string FeatureSchema::to_text() const {
  std::ostringstream out;
  out << "target " << target_.name;
  for (const auto& l : target_.labels) out << ' ' << l;
  out << '\n';
  for (const auto& f : features_) {
    out << "feature " << f.name;
    if (f.kind == FeatureKind::Continuous) {
      out << " continuous";
    } else {
      out << " categorical";
      for (const auto& c : f.categories) out << ' ' << c;
    }
    out << '\n';
  }
  return out.str();
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> FeatureSchema::category_index(std::size_t feature,
                                                         std::string_view value) const {
  const auto& cats = features_.at(feature).categories;
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (cats[i] == value) return i;
  return std::nullopt;
}

std::optional<std::size_t> FeatureSchema::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < target_.labels.size(); ++i)
    if (target_.labels[i] == label) return i;
  return std::nullopt;
}

}  // namespace rulemine::data
