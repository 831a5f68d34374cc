#include "symplectica/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace symplectica {

namespace {

void require_covariance(const Matrix& v, double hbar, double symmetry_tol) {
  if (!v.is_square() || v.rows() == 0 || v.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension,
                "covariance must be 2n x 2n with n >= 1, got " + v.shape());
  }
  require_symmetric(v, symmetry_tol, "covariance matrix");
  if (!(hbar >= 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be non-negative and finite");
  }
}

}  // namespace

ComplexMatrix uncertainty_matrix(const Matrix& v, double hbar) {
  const Matrix j = symplectic_form(v.rows() / 2);
  ComplexMatrix d(symmetrized(v));
  for (std::size_t a = 0; a < v.rows(); ++a)
    for (std::size_t b = 0; b < v.cols(); ++b) d(a, b) += Complex(0.0, 0.5 * hbar * j(a, b));
  return d;
}

double psd_check_direct(const Matrix& v, double hbar, const UncertaintyTolerances& tol) {
  require_covariance(v, hbar, tol.symplectic.kernel.symmetry);
  return hermitian_eig(uncertainty_matrix(v, hbar), tol.symplectic.kernel).values.front();
}

Vector delta_spectrum(const Matrix& v, double hbar, const UncertaintyTolerances& tol) {
  require_covariance(v, hbar, tol.symplectic.kernel.symmetry);
  const Vector mu = symplectic_spectrum(v, tol.symplectic);
  Vector d;
  d.reserve(2 * mu.size());
  for (double m : mu) {
    d.push_back(m - 0.5 * hbar);
    d.push_back(m + 0.5 * hbar);
  }
  std::sort(d.begin(), d.end());
  return d;
}

UncertaintyReport rs_check(const CovarianceMatrix& cov, double hbar,
                           const UncertaintyTolerances& tol) {
  const Matrix& v = cov.v;
  require_covariance(v, hbar, tol.symplectic.kernel.symmetry);
  if (cov.mean && cov.mean->size() != v.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "mean vector has wrong dimension");
  }
  UncertaintyReport r;
  const double scale = v.max_abs();

  const auto pos = is_positive_definite(v, tol.symplectic.kernel.positivity,
                                        tol.symplectic.kernel);
  r.min_variance_eig = pos.min_eigenvalue;
  r.classical_ok = pos.min_eigenvalue >= -tol.classical * scale;

  r.delta_min_eig =
      hermitian_eig(uncertainty_matrix(v, hbar), tol.symplectic.kernel).values.front();
  r.delta_valid = r.delta_min_eig >= -tol.delta * std::max(scale, hbar);

  if (pos.positive_definite) {
    r.symplectic_spectrum = symplectic_spectrum(v, tol.symplectic);
    r.min_mu = r.symplectic_spectrum->front();
    r.symplectic_valid = *r.min_mu >= 0.5 * hbar * (1.0 - tol.saturation);
    r.valid = r.symplectic_valid;
    r.routes_agree = r.symplectic_valid == r.delta_valid;
  } else {
    r.symplectic_route_error =
        r.classical_ok ? ErrorCode::SingularCovariance : ErrorCode::NotPositiveDefinite;
    r.valid = r.delta_valid;
  }
  return r;
}

CovarianceMatrix covariance_congruence(const CovarianceMatrix& cov, const Matrix& s,
                                       double tol) {
  if (cov.v.rows() != s.rows() || !s.is_square()) {
    throw Error(ErrorCode::DimensionMismatch,
                "covariance " + cov.v.shape() + " vs transform " + s.shape());
  }
  // Sᵀ-congruence by Sᵀ: S·V·Sᵀ = (Sᵀ)ᵀ·V·(Sᵀ), and Sᵀ is symplectic iff S is.
  CovarianceMatrix out;
  out.v = symplectic_congruence(cov.v, s.transpose(), tol);
  if (cov.mean) out.mean = s * *cov.mean;
  return out;
}

}  // namespace symplectica
