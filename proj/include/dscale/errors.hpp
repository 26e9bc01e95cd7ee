#pragma once

#include <stdexcept>
#include <string>

namespace dscale {

/// Base class for every numerical failure raised by the library. The CLI maps
/// any of these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Endpoints of a bracket do not straddle a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted, or a truncated sum failed its stability check.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A scan found no sign change; for atoms this means the system lies outside
/// the maximal-symmetry validity domain.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where the closed forms exist.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |d eps / d r_s| below the configured floor, so delta r_s diverges.
class SingularDerivativeError : public Error {
 public:
  using Error::Error;
};

}  // namespace dscale
