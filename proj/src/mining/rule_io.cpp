#include "rulemine/mining/rule_io.hpp"

#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "rulemine/error.hpp"

namespace rulemine::mining {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "rulemine.rules";
constexpr int kVersion = 1;

json z_to_json(double z) { return z == kUnscorable ? json(nullptr) : json(z); }

}  // namespace

json rule_record(const Rule& r, const data::FeatureSchema* schema) {
  json conds = json::array();
  for (const auto& cond : r.conditions) {
    json jc{{"feature", cond.feature}};
    if (schema) jc["name"] = schema->feature(cond.feature).name;
    if (cond.is_interval())
      jc["bins"] = {cond.interval().lo + 1, cond.interval().hi + 1};
    else
      jc["categories"] = cond.levels();
    conds.push_back(std::move(jc));
  }
  json rec{{"class", r.target_class}};
  if (schema) rec["label"] = schema->target().labels.at(r.target_class);
  rec["conditions"] = std::move(conds);
  rec["n"] = r.stats.n;
  rec["class_count"] = r.stats.class_count;
  rec["p"] = r.stats.p;
  rec["p0"] = r.stats.p0;
  rec["z"] = z_to_json(r.stats.z);
  return rec;
}

Rule rule_from_record(const json& rec, std::size_t n_classes) {
  try {
    Rule r;
    const auto c = rec.at("class").get<std::size_t>();
    if (c >= n_classes) throw DataError("rule class out of range");
    r.target_class = static_cast<int>(c);
    for (const auto& jc : rec.at("conditions")) {
      Condition cond;
      cond.feature = jc.at("feature").get<std::size_t>();
      if (jc.contains("bins")) {
        const auto b = jc["bins"].get<std::vector<int>>();
        if (b.size() != 2 || b[0] < 1 || b[0] > b[1]) throw DataError("bad bin range");
        cond.payload = Interval{b[0] - 1, b[1] - 1};
      } else {
        std::uint64_t mask = 0;
        for (int k : jc.at("categories").get<std::vector<int>>()) {
          if (k < 0 || k >= 64) throw DataError("bad category index");
          mask |= std::uint64_t{1} << k;
        }
        if (!mask) throw DataError("empty category set");
        cond.payload = CategorySet{mask};
      }
      r.conditions.push_back(std::move(cond));
    }
    r.stats.n = rec.at("n").get<std::size_t>();
    r.stats.class_count = rec.at("class_count").get<std::size_t>();
    r.stats.p = rec.at("p").get<double>();
    r.stats.p0 = rec.at("p0").get<double>();
    r.stats.z = rec.at("z").is_null() ? kUnscorable : rec.at("z").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed rule record: ") + e.what());
  }
}

void write_rules(const RuleSet& rules, std::ostream& out, const data::FeatureSchema* schema) {
  out << json{{"format", kFormat}, {"version", kVersion}, {"n_classes", rules.n_classes()}}.dump()
      << '\n';
  for (const auto& per_class : rules.by_class)
    for (const auto& r : per_class) out << rule_record(r, schema).dump() << '\n';
}

RuleSet read_rules(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("rules file is empty");
  RuleSet rules;
  std::size_t lineno = 1;
  try {
    const auto header = json::parse(line);
    if (header.value("format", "") != kFormat) throw DataError("not a rules file");
    if (header.at("version").get<int>() != kVersion) throw DataError("unsupported rules version");
    rules = RuleSet(header.at("n_classes").get<std::size_t>());
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      Rule r = rule_from_record(json::parse(line), rules.n_classes());
      rules.by_class[r.target_class].push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw DataError("rules line " + std::to_string(lineno) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError("rules line " + std::to_string(lineno) + ": " + e.what());
  }
  return rules;
}

std::string describe_condition(const Condition& c, const data::FeatureSchema& schema) {
  const auto& spec = schema.feature(c.feature);
  std::ostringstream out;
  out << spec.name;
  if (c.is_interval()) {
    out << " in bins [" << c.interval().lo + 1 << ", " << c.interval().hi + 1 << "]";
  } else {
    out << " in {";
    bool first = true;
    for (int k : c.levels()) {
      out << (first ? "" : ", ") << (static_cast<std::size_t>(k) < spec.categories.size() ? spec.categories[k] : std::to_string(k));
      first = false;
    }
    out << "}";
  }
  return out.str();
}

std::string describe_rule(const Rule& r, const data::FeatureSchema& schema) {
  std::string out;
  for (const auto& c : r.conditions) {
    if (!out.empty()) out += " AND ";
    out += describe_condition(c, schema);
  }
  return out + " => " + schema.target().labels.at(r.target_class);
}

}  // namespace rulemine::mining
