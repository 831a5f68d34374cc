#include "symplectica/matrix.hpp"

namespace symplectica {

double symmetry_defect(const Matrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "matrix " + a.shape() + " is not square");
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      defect = std::max(defect, std::abs(a(i, j) - a(j, i)));
  const double scale = a.max_abs();
  return scale == 0.0 ? 0.0 : defect / scale;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "matrix " + a.shape() + " is not square");
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      defect = std::max(defect, std::abs(a(i, j) - std::conj(a(j, i))));
  const double scale = a.max_abs();
  return scale == 0.0 ? 0.0 : defect / scale;
}

Matrix symmetrized(const Matrix& a) {
  Matrix s = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = m;
      s(j, i) = m;
    }
  return s;
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sum");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector difference");
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vector operator*(double s, const Vector& a) {
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::NonFinite, std::string(what) + " must be finite");
    }
  }
}

}  // namespace symplectica
