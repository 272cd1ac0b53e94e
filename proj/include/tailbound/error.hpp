#pragma once

#include <stdexcept>
#include <string>

namespace tailbound {

/// Parameters that violate a distribution or configuration invariant.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (p outside (0,1), nu <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation needs a finite moment the distribution does not have.
class InfiniteMoment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or insufficient input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tailbound
