#pragma once

#include <stdexcept>
#include <string>

namespace tclq {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative method (quadrature, root finding, truncation) did not reach
/// its target tolerance. `achieved()` carries the best error estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// The ODE integrator gave up (step size collapse or step budget exhausted).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A linear system was singular (or numerically so) at the requested point.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// File or stream failure; the message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tclq
