#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

// Bad input: malformed config, invalid parameters, hypothesis violations.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point or argument outside the domain of the operation (e.g. |z| >= 1).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A point beyond the deepest annulus of a truncated tree.
struct OutOfDepthError : DomainError {
  using DomainError::DomainError;
};

// Starvation, solver failure, non-convergence.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bergman
