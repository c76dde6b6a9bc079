#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rulemine/data/dataset.hpp"

namespace rulemine::data {

inline constexpr std::string_view kDefaultMissingToken = "?";

/// Reads a comma-separated file with one header row. Columns are matched to
/// the schema by header name, so the target may sit in any column; every
/// header name must be known to the schema and vice versa.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 std::string_view missing_token = kDefaultMissingToken);
Dataset parse_csv(std::istream& in, const FeatureSchema& schema,
                  std::string_view missing_token = kDefaultMissingToken,
                  const std::string& source = "<stream>");

/// Writes features in schema order then the target, using category and label
/// names; missing cells are written as the missing token.
void write_csv(const Dataset& ds, std::ostream& out,
               std::string_view missing_token = kDefaultMissingToken);

/// Formats a double so that parsing it back yields the same value.
std::string format_double(double v);

}  // namespace rulemine::data
