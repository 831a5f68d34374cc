#pragma once

// Robertson–Schrödinger validation of covariance matrices.
//
// A real symmetric V is the covariance matrix of a quantum state iff
// Δ = V + (iħ/2)J ⪰ 0, equivalently iff every symplectic eigenvalue of V is
// at least ħ/2. Both routes are computed and cross-checked.

#include <optional>

#include "symplectica/symplectic.hpp"

namespace symplectica {

struct CovarianceMatrix {
  Matrix v;
  std::optional<Vector> mean;

  std::size_t dof() const noexcept { return v.rows() / 2; }
};

struct UncertaintyTolerances {
  SymplecticTolerances symplectic{};
  /// valid ⇔ min μ ≥ (ħ/2)(1 − saturation).
  double saturation = 1e-9;
  /// Δ route: min eigenvalue ≥ −delta·max(‖V‖_max, ħ).
  double delta = 1e-9;
  /// Classical check: min eigenvalue of V ≥ −classical·‖V‖_max.
  double classical = 1e-12;
};

struct UncertaintyReport {
  /// Empty when V is singular: the symplectic route is then unavailable.
  std::optional<Vector> symplectic_spectrum;
  std::optional<double> min_mu;
  std::optional<ErrorCode> symplectic_route_error;
  bool valid = false;
  bool symplectic_valid = false;
  bool delta_valid = false;
  double delta_min_eig = 0.0;
  double min_variance_eig = 0.0;
  bool classical_ok = false;
  /// Both routes ran and gave the same verdict.
  bool routes_agree = true;
};

UncertaintyReport rs_check(const CovarianceMatrix& cov, double hbar,
                           const UncertaintyTolerances& tol = {});

/// Δ = V + (iħ/2)J.
ComplexMatrix uncertainty_matrix(const Matrix& v, double hbar);

/// Min Euclidean eigenvalue of Δ; works for singular V.
double psd_check_direct(const Matrix& v, double hbar, const UncertaintyTolerances& tol = {});

/// Eigenvalues of Δ′ = Λ_V + (iħ/2)J, i.e. {μj ± ħ/2}, ascending.
Vector delta_spectrum(const Matrix& v, double hbar, const UncertaintyTolerances& tol = {});

/// V′ = S·V·Sᵀ for symplectic S.
CovarianceMatrix covariance_congruence(const CovarianceMatrix& cov, const Matrix& s,
                                       double tol = 1e-8);

}  // namespace symplectica
