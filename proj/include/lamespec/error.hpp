#pragma once

#include <stdexcept>
#include <string>

namespace lamespec {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Root bracket whose endpoints do not have opposite signs.
struct InvalidBracket : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Material parameters outside mu > 0, lambda + mu > 0.
struct AdmissibilityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not converge or hit a singular system.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lamespec
