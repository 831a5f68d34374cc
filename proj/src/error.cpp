#include "symplectica/error.hpp"

#include <sstream>

namespace symplectica {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

std::string pd_message(const std::string& what, double min_eigenvalue) {
  std::ostringstream os;
  os.precision(17);
  os << what << " is not positive-definite (min eigenvalue " << min_eigenvalue
     << ")";
  return os.str();
}

}  // namespace

NotPositiveDefiniteError::NotPositiveDefiniteError(const std::string& what,
                                                   double min_eigenvalue)
    : Error(ErrorCode::NotPositiveDefinite, pd_message(what, min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue) {}

}  // namespace symplectica
