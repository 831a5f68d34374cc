#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symplectica {

enum class ErrorCode {
  NonFinite,
  NonSquare,
  DimensionMismatch,
  OddDimension,
  InvalidArgument,
  NonSymmetric,
  NonHermitian,
  NonConvergent,
  NotPositiveDefinite,
  NotSymplectic,
  SingularMatrix,
  SingularHessian,
  SingularCovariance,
  SingularJacobian,
  NoConvergence,
  VerificationFailed,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a matrix required to be positive-definite is not. Carries the
/// smallest Euclidean eigenvalue that was observed.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(const std::string& what, double min_eigenvalue);

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace symplectica
