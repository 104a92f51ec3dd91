#pragma once

#include <stdexcept>

namespace pebounds {

// Bad inputs: parameters outside their domain, mismatched dimensions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation itself failed: PSD violation, truncation leakage,
// degenerate support.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pebounds
