#pragma once

// Numeric kernel: Jacobi eigensolvers for symmetric and Hermitian matrices,
// SPD square roots, the matrix exponential and LU-based solves.

#include <cstddef>

#include "symplectica/matrix.hpp"

namespace symplectica {

/// Relative tolerances used by the kernel. Every check is relative to ‖A‖_max.
struct KernelTolerances {
  double symmetry = 1e-10;
  /// Positivity: λ_min > positivity · λ_max.
  double positivity = 1e-12;
  int max_sweeps = 100;
};

/// Eigenvalues ascending; eigenvectors are the columns of `vectors`.
/// Each eigenvector is sign-normalized so that its largest-magnitude entry
/// (first one on ties) is positive.
struct SpectralDecomposition {
  Vector values;
  Matrix vectors;
};

/// Hermitian counterpart: real ascending eigenvalues, unitary columns, each
/// column phase-normalized so its largest-magnitude entry is real positive.
struct HermitianDecomposition {
  Vector values;
  ComplexMatrix vectors;
};

SpectralDecomposition sym_eig(const Matrix& a, const KernelTolerances& tol = {});

HermitianDecomposition hermitian_eig(const ComplexMatrix& a,
                                     const KernelTolerances& tol = {});

/// Eigenvalues only, ascending.
Vector sym_eigenvalues(const Matrix& a, const KernelTolerances& tol = {});

/// Principal square root of a symmetric positive-definite matrix.
Matrix sqrt_spd(const Matrix& a, const KernelTolerances& tol = {});

/// Inverse principal square root (√A)⁻¹ of an SPD matrix.
Matrix inv_sqrt_spd(const Matrix& a, const KernelTolerances& tol = {});

/// Matrix exponential by scaling and squaring with a diagonal Padé(6)
/// approximant.
Matrix expm(const Matrix& a);

struct PositivityReport {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// True iff λ_min > rel_tol·λ_max and λ_max > 0.
PositivityReport is_positive_definite(const Matrix& a, double rel_tol = 1e-12,
                                      const KernelTolerances& tol = {});

/// Throws NotPositiveDefiniteError naming `what` unless `a` is SPD.
void require_positive_definite(const Matrix& a, const char* what,
                               const KernelTolerances& tol = {});

void require_symmetric(const Matrix& a, double rel_tol, const char* what);

/// LU factorization with partial pivoting.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a);

  bool singular() const noexcept { return singular_; }
  double determinant() const noexcept;
  /// Smallest |pivot| relative to the largest; a cheap conditioning hint.
  double pivot_ratio() const noexcept { return pivot_ratio_; }

  Vector solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
  double pivot_ratio_ = 0.0;
};

double determinant(const Matrix& a);
Matrix inverse(const Matrix& a);
Vector solve(const Matrix& a, std::span<const double> b);

}  // namespace symplectica
