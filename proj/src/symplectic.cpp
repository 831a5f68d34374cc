#include "symplectica/symplectic.hpp"

#include <cmath>
#include <sstream>

namespace symplectica {

namespace {

std::size_t half_dimension(const Matrix& m, const char* what) {
  if (!m.is_square()) {
    throw Error(ErrorCode::NonSquare, std::string(what) + " must be square, got " + m.shape());
  }
  if (m.rows() % 2 != 0 || m.rows() == 0) {
    throw Error(ErrorCode::OddDimension,
                std::string(what) + " must have even, nonzero dimension, got " + m.shape());
  }
  return m.rows() / 2;
}

// i·(√M J √M), Hermitian with spectrum {±μj}.
ComplexMatrix hermitian_form(const Matrix& root, const Matrix& j) {
  const Matrix skew = root * j * root;
  ComplexMatrix h(skew.rows(), skew.cols());
  for (std::size_t r = 0; r < skew.rows(); ++r)
    for (std::size_t c = 0; c < skew.cols(); ++c)
      h(r, c) = Complex(0.0, 0.5 * (skew(r, c) - skew(c, r)));
  return h;
}

void require_spd(const Matrix& m, const SymplecticTolerances& tol, const char* what) {
  require_symmetric(m, tol.kernel.symmetry, what);
  require_positive_definite(m, what, tol.kernel);
}

}  // namespace

Matrix symplectic_form(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "symplectic form needs n >= 1");
  }
  Matrix j(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = 1.0;
    j(n + i, i) = -1.0;
  }
  return j;
}

Matrix symplectic_inverse(const Matrix& s) {
  const std::size_t n = half_dimension(s, "symplectic matrix");
  const Matrix j = symplectic_form(n);
  return -(j * s.transpose() * j);
}

SymplecticCheck is_symplectic(const Matrix& s, double tol) {
  const std::size_t n = half_dimension(s, "is_symplectic input");
  const Matrix j = symplectic_form(n);
  SymplecticCheck r;
  r.residual = max_abs_diff(s.transpose() * j * s, j);
  r.symplectic = r.residual <= tol;
  return r;
}

Matrix williamson_diagonal(std::span<const double> spectrum) {
  const std::size_t n = spectrum.size();
  Matrix l(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    l(k, k) = spectrum[k];
    l(n + k, n + k) = spectrum[k];
  }
  return l;
}

Matrix WilliamsonResult::lambda() const { return williamson_diagonal(spectrum); }

Vector symplectic_spectrum(const Matrix& m, const SymplecticTolerances& tol) {
  const std::size_t n = half_dimension(m, "symplectic_spectrum input");
  require_spd(m, tol, "symplectic_spectrum input");
  const Matrix root = sqrt_spd(m, tol.kernel);
  const auto dec = hermitian_eig(hermitian_form(root, symplectic_form(n)), tol.kernel);
  return Vector(dec.values.begin() + static_cast<std::ptrdiff_t>(n), dec.values.end());
}

WilliamsonResult williamson(const Matrix& m, const SymplecticTolerances& tol) {
  const std::size_t n = half_dimension(m, "williamson input");
  require_spd(m, tol, "williamson input");

  const auto euclid = sym_eig(m, tol.kernel);
  const std::size_t dim = 2 * n;
  Matrix root(dim, dim);
  Matrix inv_root(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const double r = std::sqrt(euclid.values[k]);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b) {
        const double vv = euclid.vectors(a, k) * euclid.vectors(b, k);
        root(a, b) += r * vv;
        inv_root(a, b) += vv / r;
      }
  }
  root = symmetrized(root);
  inv_root = symmetrized(inv_root);

  const Matrix j = symplectic_form(n);
  const Matrix skew = root * j * root;
  const auto dec = hermitian_eig(hermitian_form(root, j), tol.kernel);

  // For eigenvalue +μ with eigenvector w = (u + i v)/√2 one has
  // skew·u = μ v and skew·v = −μ u, so rows (v, u) put skew into Λ·J form.
  Matrix o(dim, dim);
  Vector spectrum(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = n + k;
    spectrum[k] = dec.values[col];
    for (std::size_t a = 0; a < dim; ++a) {
      const Complex w = dec.vectors(a, col);
      o(k, a) = std::sqrt(2.0) * w.imag();
      o(n + k, a) = std::sqrt(2.0) * w.real();
    }
  }
  const Matrix canon = o * skew * o.transpose();
  for (std::size_t k = 0; k < n; ++k) {
    if (canon(k, n + k) < 0.0) {
      for (std::size_t a = 0; a < dim; ++a) std::swap(o(k, a), o(n + k, a));
    }
  }

  Vector sqrt_diag(dim);
  for (std::size_t k = 0; k < n; ++k) {
    sqrt_diag[k] = std::sqrt(spectrum[k]);
    sqrt_diag[n + k] = sqrt_diag[k];
  }

  WilliamsonResult r;
  r.s = Matrix::diagonal(sqrt_diag) * o * inv_root;
  r.spectrum = std::move(spectrum);
  r.m = m;
  r.symplectic_residual = max_abs_diff(r.s.transpose() * j * r.s, j);
  const double scale = m.max_abs();
  r.diagonal_residual = max_abs_diff(r.s * m * r.s.transpose(), r.lambda()) / scale;

  if (r.symplectic_residual > tol.verification || r.diagonal_residual > tol.verification) {
    std::ostringstream os;
    os << "Williamson verification failed: |S^T J S - J| = " << r.symplectic_residual
       << ", |S M S^T - Lambda|/|M| = " << r.diagonal_residual;
    throw Error(ErrorCode::VerificationFailed, os.str());
  }
  return r;
}

Matrix symplectic_congruence(const Matrix& m, const Matrix& s, double tol) {
  if (m.rows() != s.rows() || !m.is_square() || !s.is_square()) {
    throw Error(ErrorCode::DimensionMismatch,
                "symplectic_congruence: " + m.shape() + " vs " + s.shape());
  }
  const auto check = is_symplectic(s, tol);
  if (!check.symplectic) {
    std::ostringstream os;
    os << "matrix is not symplectic (residual " << check.residual << ")";
    throw Error(ErrorCode::NotSymplectic, os.str());
  }
  return symmetrized(s.transpose() * m * s);
}

Matrix random_symplectic(std::size_t n, std::mt19937_64& rng, double tau) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "random_symplectic needs n >= 1");
  const std::size_t dim = 2 * n;
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  Matrix g(dim, dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a; b < dim; ++b) {
      const double x = normal(rng);
      g(a, b) = x;
      g(b, a) = x;
    }
  return expm(symplectic_form(n) * g * tau);
}

Matrix random_symplectic(std::size_t n, std::uint64_t seed, double tau) {
  std::mt19937_64 rng(seed);
  return random_symplectic(n, rng, tau);
}

}  // namespace symplectica
