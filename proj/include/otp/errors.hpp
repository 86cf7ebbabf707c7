#pragma once

#include <stdexcept>

namespace otp {

// Structural errors are exceptions. A rejected signature or a ⊥ program
// output is a value, never one of these.

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LayoutError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

struct OneShotViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace otp
