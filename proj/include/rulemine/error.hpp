#pragma once

#include <stdexcept>
#include <string>

namespace rulemine {

// Categorized failures. The CLI maps each category to its exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, arguments or hyperparameters (exit 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or otherwise unusable input data (exit 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (exit 4).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace rulemine
