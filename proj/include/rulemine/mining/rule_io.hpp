#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rulemine/data/schema.hpp"
#include "rulemine/mining/rule.hpp"

namespace rulemine::mining {

// Line-delimited JSON. The first line is a header
//   {"format":"rulemine.rules","version":1,"n_classes":K}
// followed by one record per rule:
//   {"class":c,"conditions":[{"feature":f,"bins":[lo,hi]} | {"feature":f,"categories":[...]}],
//    "n":..,"class_count":..,"p":..,"p0":..,"z":..}
// Bins are 1-based and inclusive; categories are 0-based indices. When a
// schema is supplied, feature and class names are added for readability and
// ignored on reading. Doubles use shortest round-trip formatting.

void write_rules(const RuleSet& rules, std::ostream& out,
                 const data::FeatureSchema* schema = nullptr);
RuleSet read_rules(std::istream& in);

/// One rule record as written by write_rules.
nlohmann::json rule_record(const Rule& r, const data::FeatureSchema* schema = nullptr);
/// Throws DataError.
Rule rule_from_record(const nlohmann::json& rec, std::size_t n_classes);

std::string describe_condition(const Condition& c, const data::FeatureSchema& schema);
std::string describe_rule(const Rule& r, const data::FeatureSchema& schema);

}  // namespace rulemine::mining
