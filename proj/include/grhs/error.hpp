#pragma once

#include <stdexcept>
#include <string>

namespace grhs {

// Evaluation outside a profile's domain, log/power of an inadmissible
// argument, or a non-positive conformal/warping factor.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature or ODE integration failed, or a non-finite value appeared.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: inconsistent dimensions, bad parameters, bad JSON.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace grhs
