#pragma once

#include <stdexcept>
#include <string>

namespace sandpile {

/// Bad input: malformed graphs, unknown vertices, schema violations,
/// unstable initial data. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (non-convergence, overflow, line
/// search breakdown, truncation too small). Maps to CLI exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sandpile
