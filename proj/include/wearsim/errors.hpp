#pragma once

#include <stdexcept>
#include <string>

namespace wearsim {

// A model was evaluated outside its physical domain (T <= 0, j <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A model was called with an incompatible variant or parameter binding.
class BindingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration or input data (schema violations, bad CSV).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative procedure failed to converge or the data is degenerate.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wearsim
