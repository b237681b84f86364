#pragma once

#include <stdexcept>
#include <string>

namespace cpauct {

// Invalid or inconsistent user input (bad parameters, malformed config).
// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge or produced non-finite values.
// The CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The request is valid but outside the set of cases with a known closed form.
class UnsupportedCaseError : public std::runtime_error {
 public:
  explicit UnsupportedCaseError(const std::string& what) : std::runtime_error(what) {}
};

// A Monte Carlo estimate has no information content (e.g. zero wins).
class DegenerateEstimateError : public std::runtime_error {
 public:
  explicit DegenerateEstimateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpauct
