#include "rulemine/data/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "rulemine/error.hpp"

namespace rulemine::data {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.emplace_back(trim(cell));
  return out;
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Dataset parse_csv(std::istream& in, const FeatureSchema& schema, std::string_view missing_token,
                  const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  const auto header = split_row(line);

  constexpr std::size_t kTargetSlot = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(header.size());
  std::vector<bool> seen(schema.n_features(), false);
  bool seen_target = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.target().name) {
      if (seen_target) throw DataError(source + ": target column repeated");
      seen_target = true;
      slot[c] = kTargetSlot;
    } else if (auto f = schema.index_of(header[c])) {
      if (seen[*f]) throw DataError(source + ": column '" + header[c] + "' repeated");
      seen[*f] = true;
      slot[c] = *f;
    } else {
      throw DataError(source + ": column '" + header[c] + "' is not in the schema");
    }
  }
  if (!seen_target) throw DataError(source + ": target column '" + schema.target().name + "' missing");
  for (std::size_t f = 0; f < seen.size(); ++f)
    if (!seen[f]) throw DataError(source + ": column '" + schema.feature(f).name + "' missing");

  std::vector<std::vector<double>> columns(schema.n_features());
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (cells.size() != header.size())
      throw DataError(where + "expected " + std::to_string(header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      if (slot[c] == kTargetSlot) {
        auto y = schema.label_index(cell);
        if (!y) throw DataError(where + "unknown class label '" + cell + "'");
        labels.push_back(static_cast<int>(*y));
        continue;
      }
      const auto f = slot[c];
      const auto& spec = schema.feature(f);
      if (cell == missing_token) {
        columns[f].push_back(kMissing);
      } else if (spec.kind == FeatureKind::Continuous) {
        double v;
        if (!parse_number(cell, v))
          throw DataError(where + "unparseable number '" + cell + "' in '" + spec.name + "'");
        columns[f].push_back(v);
      } else {
        auto k = schema.category_index(f, cell);
        if (!k) throw DataError(where + "unknown category '" + cell + "' in '" + spec.name + "'");
        columns[f].push_back(static_cast<double>(*k));
      }
    }
  }
  if (labels.empty()) throw DataError(source + ": no data rows");
  return Dataset(schema, std::move(columns), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 std::string_view missing_token) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_csv(in, schema, missing_token, path.string());
}

void write_csv(const Dataset& ds, std::ostream& out, std::string_view missing_token) {
  const auto& schema = ds.schema();
  for (const auto& f : schema.features()) out << f.name << ',';
  out << schema.target().name << '\n';
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
      const double v = ds.value(i, f);
      if (is_missing(v))
        out << missing_token;
      else if (schema.feature(f).kind == FeatureKind::Categorical)
        out << schema.feature(f).categories[static_cast<std::size_t>(v)];
      else
        out << format_double(v);
      out << ',';
    }
    out << schema.target().labels[ds.label(i)] << '\n';
  }
}

}  // namespace rulemine::data
