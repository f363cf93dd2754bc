#pragma once

#include <stdexcept>
#include <string>

namespace neardgd {

/// Graph is empty, disconnected, or otherwise unusable as a network.
class InvalidTopology : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition (non-symmetric input, bad sizes, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DimensionMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A run or config failed validation before any iteration was executed.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterates became non-finite, blew past the divergence guard, or left the
/// asserted trajectory box.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace neardgd
