#pragma once

// Symplectic form, symplectic predicates and the Williamson normal form.
//
// Phase-space ordering is (q1..qn, p1..pn) throughout; the standard form is
// J = [[0, I], [-I, 0]].

#include <cstdint>
#include <random>

#include "symplectica/linalg.hpp"
#include "symplectica/matrix.hpp"

namespace symplectica {

/// Tolerances for symplectic computations. `verification` bounds the
/// residuals checked by williamson() before it returns.
struct SymplecticTolerances {
  KernelTolerances kernel{};
  double verification = 1e-8;
};

/// The standard symplectic form for n degrees of freedom.
Matrix symplectic_form(std::size_t n);

struct SymplecticCheck {
  bool symplectic = false;
  /// ‖SᵀJS − J‖_max
  double residual = 0.0;
};

SymplecticCheck is_symplectic(const Matrix& s, double tol = 1e-8);

/// Symplectic eigenvalues of an SPD matrix, ascending.
Vector symplectic_spectrum(const Matrix& m, const SymplecticTolerances& tol = {});

/// S·M·Sᵀ = Λ with S symplectic and Λ = diag(μ, μ).
struct WilliamsonResult {
  Matrix s;
  Vector spectrum;
  /// The decomposed matrix, kept so the invariants stay checkable.
  Matrix m;
  double symplectic_residual = 0.0;
  double diagonal_residual = 0.0;

  std::size_t dof() const noexcept { return spectrum.size(); }
  /// diag(μ1..μn, μ1..μn)
  Matrix lambda() const;
};

WilliamsonResult williamson(const Matrix& m, const SymplecticTolerances& tol = {});

/// diag(μ1..μn, μ1..μn)
Matrix williamson_diagonal(std::span<const double> spectrum);

/// Sᵀ·M·S, after checking that S is symplectic to `tol`.
Matrix symplectic_congruence(const Matrix& m, const Matrix& s, double tol = 1e-8);

/// expm(J·G·tau) for a random symmetric G with N(0, 1/(2n)) entries.
Matrix random_symplectic(std::size_t n, std::mt19937_64& rng, double tau = 1.0);
Matrix random_symplectic(std::size_t n, std::uint64_t seed, double tau = 1.0);

/// Inverse of a symplectic matrix, −J·Sᵀ·J, without a linear solve.
Matrix symplectic_inverse(const Matrix& s);

}  // namespace symplectica
