#pragma once

#include <stdexcept>
#include <string>

namespace nag {

// Invalid configuration or contract violation (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: divergence, projection breakdown (CLI exit code 2).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nag
