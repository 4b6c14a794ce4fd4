#pragma once

#include <stdexcept>
#include <string>

namespace tscalc {

/// Malformed or self-contradictory input documents and parameters.
class SpecError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition does not hold (point outside the scale,
/// empty admissible window, division by zero, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace tscalc
