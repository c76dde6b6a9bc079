#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rulemine::data {

enum class FeatureKind { Continuous, Categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  std::vector<std::string> categories;  // empty for continuous features

  bool operator==(const FeatureSpec&) const = default;
};

struct TargetSpec {
  std::string name;
  std::vector<std::string> labels;

  bool operator==(const TargetSpec&) const = default;
};

/// Ordered, typed description of a dataset's columns.
///
/// Text form, one declaration per line ('#' starts a comment):
///
///     target <name> <label> <label> ...
///     feature <name> continuous
///     feature <name> categorical <category> <category> ...
class FeatureSchema {
 public:
  FeatureSchema() = default;
  /// Throws ConfigError when names repeat, a categorical feature has fewer
  /// than two categories or the target has fewer than two labels.
  FeatureSchema(std::vector<FeatureSpec> features, TargetSpec target);

  static FeatureSchema parse(std::string_view text);
  static FeatureSchema load(const std::filesystem::path& path);
  std::string to_text() const;

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& feature(std::size_t f) const { return features_.at(f); }
  std::size_t n_features() const { return features_.size(); }
  const TargetSpec& target() const { return target_; }
  std::size_t n_classes() const { return target_.labels.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> category_index(std::size_t feature, std::string_view value) const;
  std::optional<std::size_t> label_index(std::string_view label) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureSpec> features_;
  TargetSpec target_;
};

}  // namespace rulemine::data
