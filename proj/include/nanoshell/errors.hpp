#pragma once

#include <stdexcept>
#include <string>

namespace nanoshell {

// Error taxonomy. The CLI maps each family onto a distinct exit code.

/// Invalid argument (zero Bessel argument, bad geometry, absorbing host, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value outside the range where a model is defined (table bounds,
/// floating-point overflow in a recurrence).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Singular matching system or a quadrature that failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nanoshell
