#pragma once

#include <stdexcept>
#include <string>

namespace sailhelm {

/// Argument outside the documented domain of an operation (non-finite angle,
/// out-of-range table query, malformed configuration value).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Operation called in a state where it is not defined.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// Caller broke a precondition that the callee can detect.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sailhelm
