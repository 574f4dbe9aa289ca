#pragma once

#include <stdexcept>
#include <string>

namespace kslab {

// Everything thrown by the library derives from Error, so callers can tell
// library failures apart from standard library ones.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid parameters, malformed config files, unusable grids.
struct ConfigError : Error {
  using Error::Error;
};

// Field/grid size mismatches.
struct DimensionError : Error {
  using Error::Error;
};

// Cross-quantity consistency violations (e.g. the mass handed to the
// elliptic solve disagrees with the mass stored in w).
struct ConsistencyError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

// A constraint system with no solution (e.g. initial-data construction).
struct InfeasibleError : Error {
  using Error::Error;
};

// NaN/Inf encountered, or a linear solver broke down.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace kslab
