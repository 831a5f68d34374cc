#include "symplectica/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

namespace symplectica {

namespace {

double frobenius(std::span<const double> d) {
  double s = 0.0;
  for (double v : d) s += v * v;
  return std::sqrt(s);
}

double frobenius(std::span<const Complex> d) {
  double s = 0.0;
  for (const auto& v : d) s += std::norm(v);
  return std::sqrt(s);
}

// Brings A[p][q] onto the non-negative real axis by rescaling row/column q.
// No-op for real matrices, where the rotation below handles either sign.
void align_phase(Matrix&, Matrix&, std::size_t, std::size_t) {}

void align_phase(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex d = std::conj(apq) / r;  // e^{-iφ}
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) a(k, q) *= d;
  for (std::size_t k = 0; k < n; ++k) a(q, k) *= std::conj(d);
  for (std::size_t k = 0; k < n; ++k) v(k, q) *= d;
  a(p, q) = r;
  a(q, p) = r;
  a(q, q) = a(q, q).real();
}

double real_part(double v) { return v; }
double real_part(const Complex& v) { return v.real(); }

template <typename T>
void normalize_phase(DenseMatrix<T>& vectors, std::size_t col) {
  const std::size_t n = vectors.rows();
  std::size_t arg = 0;
  double best = -1.0;
  // Small slack so that entries equal up to rounding pick the first index.
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(vectors(i, col));
    if (m > best * (1.0 + 1e-12)) {
      best = m;
      arg = i;
    }
  }
  if (best <= 0.0) return;
  T phase;
  if constexpr (std::is_same_v<T, double>) {
    phase = vectors(arg, col) < 0.0 ? -1.0 : 1.0;
  } else {
    phase = std::conj(vectors(arg, col)) / best;
  }
  for (std::size_t i = 0; i < n; ++i) vectors(i, col) *= phase;
  if constexpr (std::is_same_v<T, Complex>) {
    vectors(arg, col) = Complex(std::abs(vectors(arg, col)), 0.0);
  }
}

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix. Returns the
// unsorted diagonal and accumulates rotations into `v`.
template <typename T>
Vector jacobi(DenseMatrix<T> a, DenseMatrix<T>& v, const KernelTolerances& tol) {
  const std::size_t n = a.rows();
  v = DenseMatrix<T>::identity(n);
  const double scale = frobenius(a.data());
  Vector diag(n);
  if (scale == 0.0 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) diag[i] = real_part(a(i, i));
    return diag;
  }
  const double target = DBL_EPSILON * scale;
  bool converged = false;
  for (int sweep = 0; sweep < tol.max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= target) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        align_phase(a, v, p, q);
        const double apq = real_part(a(p, q));
        const double app = real_part(a(p, p));
        const double aqq = real_part(a(q, q));
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const T akp = a(k, p);
          const T akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T apk = a(p, k);
          const T aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = T{};
        a(q, p) = T{};
        for (std::size_t k = 0; k < n; ++k) {
          const T vkp = v(k, p);
          const T vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NonConvergent,
                "Jacobi eigensolver did not converge in " +
                    std::to_string(tol.max_sweeps) + " sweeps");
  }
  for (std::size_t i = 0; i < n; ++i) diag[i] = real_part(a(i, i));
  return diag;
}

template <typename T>
void sort_and_normalize(Vector& values, DenseMatrix<T>& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  Vector sorted(n);
  DenseMatrix<T> cols(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted[k] = values[order[k]];
    for (std::size_t i = 0; i < n; ++i) cols(i, k) = vectors(i, order[k]);
    normalize_phase(cols, k);
  }
  values = std::move(sorted);
  vectors = std::move(cols);
}

}  // namespace

void require_symmetric(const Matrix& a, double rel_tol, const char* what) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, std::string(what) + " must be square, got " + a.shape());
  }
  const double defect = symmetry_defect(a);
  if (defect > rel_tol) {
    std::ostringstream os;
    os << what << " is not symmetric (relative defect " << defect << ")";
    throw Error(ErrorCode::NonSymmetric, os.str());
  }
}

SpectralDecomposition sym_eig(const Matrix& a, const KernelTolerances& tol) {
  require_symmetric(a, tol.symmetry, "sym_eig input");
  SpectralDecomposition out;
  out.values = jacobi(symmetrized(a), out.vectors, tol);
  sort_and_normalize(out.values, out.vectors);
  return out;
}

Vector sym_eigenvalues(const Matrix& a, const KernelTolerances& tol) {
  return sym_eig(a, tol).values;
}

HermitianDecomposition hermitian_eig(const ComplexMatrix& a, const KernelTolerances& tol) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "hermitian_eig input must be square, got " + a.shape());
  }
  const double defect = hermiticity_defect(a);
  if (defect > tol.symmetry) {
    std::ostringstream os;
    os << "hermitian_eig input is not Hermitian (relative defect " << defect << ")";
    throw Error(ErrorCode::NonHermitian, os.str());
  }
  ComplexMatrix h = a;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      const Complex m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = m;
      h(j, i) = std::conj(m);
    }
  }
  HermitianDecomposition out;
  out.values = jacobi(std::move(h), out.vectors, tol);
  sort_and_normalize(out.values, out.vectors);
  return out;
}

PositivityReport is_positive_definite(const Matrix& a, double rel_tol,
                                      const KernelTolerances& tol) {
  const Vector ev = sym_eigenvalues(a, tol);
  PositivityReport r;
  if (ev.empty()) return r;
  r.min_eigenvalue = ev.front();
  r.max_eigenvalue = ev.back();
  r.positive_definite =
      r.max_eigenvalue > 0.0 && r.min_eigenvalue > rel_tol * r.max_eigenvalue;
  return r;
}

void require_positive_definite(const Matrix& a, const char* what,
                               const KernelTolerances& tol) {
  const auto r = is_positive_definite(a, tol.positivity, tol);
  if (!r.positive_definite) throw NotPositiveDefiniteError(what, r.min_eigenvalue);
}

namespace {

Matrix spectral_function(const Matrix& a, const KernelTolerances& tol, const char* what,
                         double (*f)(double)) {
  const auto dec = sym_eig(a, tol);
  const double lmax = dec.values.empty() ? 0.0 : dec.values.back();
  const double lmin = dec.values.empty() ? 0.0 : dec.values.front();
  if (!(lmax > 0.0 && lmin > tol.positivity * lmax)) {
    throw NotPositiveDefiniteError(what, lmin);
  }
  const std::size_t n = a.rows();
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(dec.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = dec.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * dec.vectors(j, k);
    }
  }
  return symmetrized(r);
}

}  // namespace

Matrix sqrt_spd(const Matrix& a, const KernelTolerances& tol) {
  return spectral_function(a, tol, "sqrt_spd input",
                           [](double x) { return std::sqrt(x); });
}

Matrix inv_sqrt_spd(const Matrix& a, const KernelTolerances& tol) {
  return spectral_function(a, tol, "inv_sqrt_spd input",
                           [](double x) { return 1.0 / std::sqrt(x); });
}

Matrix expm(const Matrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "expm input must be square, got " + a.shape());
  }
  const std::size_t n = a.rows();
  if (n == 0) return a;
  constexpr int kOrder = 6;
  constexpr double kTheta = 0.5;
  const double norm = a.norm1();
  int squarings = 0;
  if (norm > kTheta) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta)));
  }
  const Matrix x = a * std::ldexp(1.0, -squarings);

  double c = 1.0;
  const Matrix eye = Matrix::identity(n);
  Matrix numer = eye;
  Matrix denom = eye;
  Matrix power = eye;
  for (int k = 1; k <= kOrder; ++k) {
    c *= static_cast<double>(kOrder - k + 1) /
         static_cast<double>(k * (2 * kOrder - k + 1));
    power = power * x;
    numer += c * power;
    denom += ((k % 2 == 0) ? c : -c) * power;
  }
  Matrix r = LuDecomposition(denom).solve(numer);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

LuDecomposition::LuDecomposition(const Matrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "LU input must be square, got " + a.shape());
  }
  const std::size_t n = a.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  double max_pivot = 0.0;
  double min_pivot = n == 0 ? 0.0 : INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    max_pivot = std::max(max_pivot, best);
    min_pivot = std::min(min_pivot, best);
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
      sign_ = -sign_;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
  pivot_ratio_ = max_pivot > 0.0 ? min_pivot / max_pivot : 0.0;
}

double LuDecomposition::determinant() const noexcept {
  if (singular_) return 0.0;
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "LU solve rhs size");
  if (singular_) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::solve(const Matrix& b) const {
  if (b.rows() != lu_.rows()) throw Error(ErrorCode::DimensionMismatch, "LU solve rhs rows");
  Matrix x(b.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const Vector col = solve(b.column(j));
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

double determinant(const Matrix& a) { return LuDecomposition(a).determinant(); }

Matrix inverse(const Matrix& a) {
  return LuDecomposition(a).solve(Matrix::identity(a.rows()));
}

Vector solve(const Matrix& a, std::span<const double> b) {
  return LuDecomposition(a).solve(b);
}

}  // namespace symplectica
