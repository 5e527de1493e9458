#pragma once

#include <stdexcept>
#include <string>

namespace fuzzy_casimir {

/// Invalid configuration or precondition supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the physical domain (e.g. a segment shorter than 2λ).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mode index outside 1..floor(L/2λ).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Operands defined on different Fock spaces.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares design is rank deficient or too ill-conditioned to trust.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace fuzzy_casimir
