#pragma once

#include <stdexcept>
#include <string>

namespace secrelay {

/// A computed quantity violated an internal invariant (e.g. a probability
/// landed outside [0,1] by more than round-off slack). Indicates a bug or a
/// numerically hostile parameter set, never a user-input problem.
class InternalConsistencyError : public std::runtime_error {
 public:
  explicit InternalConsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance within the
/// subdivision budget. Carries the error estimate actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace secrelay
