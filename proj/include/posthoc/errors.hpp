#pragma once

#include <stdexcept>
#include <string>

namespace posthoc {

// Invalid configuration: bad distribution parameters, schema violations,
// policy/universe mismatches. Messages name the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated an operation's precondition (empty candidate set, ...).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exhaustive enumeration would exceed the state budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& msg, double required_states)
      : std::runtime_error(msg), required_states(required_states) {}
  double required_states;
};

// A conditional cell needed by the estimator has no published trials.
class InsufficientDataError : public std::runtime_error {
 public:
  explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace posthoc
