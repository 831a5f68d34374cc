#pragma once

// Dense row-major matrices over double and std::complex<double>.
//
// Sizes in this library are small (2n up to a few dozen), so the matrix is a
// plain value type backed by a std::vector. All arithmetic allocates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "symplectica/error.hpp"

namespace symplectica {

using Complex = std::complex<double>;
using Vector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

namespace detail {

inline bool is_finite(double v) noexcept { return std::isfinite(v); }
inline bool is_finite(const Complex& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline double conj_if_complex(double v) noexcept { return v; }
inline Complex conj_if_complex(const Complex& v) noexcept { return std::conj(v); }

}  // namespace detail

template <typename T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    check_finite();
  }

  /// Takes ownership of row-major data; rejects NaN/Inf and size mismatch.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix data has " + std::to_string(data_.size()) +
                      " entries, expected " + std::to_string(rows_ * cols_));
    }
    check_finite();
  }

  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite();
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols);
  }

  static DenseMatrix diagonal(std::span<const T> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// Real-to-complex promotion (only meaningful for DenseMatrix<Complex>).
  template <typename U>
    requires(std::is_same_v<T, Complex> && std::is_same_v<U, double>)
  explicit DenseMatrix(const DenseMatrix<U>& real)
      : rows_(real.rows()), cols_(real.cols()), data_(real.size()) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = real.data()[k];
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Conjugate transpose; equals transpose() for real matrices.
  DenseMatrix adjoint() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = detail::conj_if_complex((*this)(i, j));
    return t;
  }

  DenseMatrix conjugate() const {
    DenseMatrix c = *this;
    for (auto& v : c.data_) v = detail::conj_if_complex(v);
    return c;
  }

  /// Largest absolute entry, ‖A‖_max.
  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Induced 1-norm (max column sum).
  double norm1() const noexcept {
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                    std::size_t nc) const {
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  DenseMatrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, T s) { return a *= s; }
  friend DenseMatrix operator*(T s, DenseMatrix a) { return a *= s; }
  friend DenseMatrix operator-(DenseMatrix a) { return a *= T{-1}; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix product " + a.shape() + " * " + b.shape());
    }
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend std::vector<T> operator*(const DenseMatrix& a, std::span<const T> x) {
    if (a.cols_ != x.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix-vector product " + a.shape() + " * " +
                      std::to_string(x.size()));
    }
    std::vector<T> y(a.rows_, T{});
    for (std::size_t i = 0; i < a.rows_; ++i) {
      T s{};
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  friend std::vector<T> operator*(const DenseMatrix& a, const std::vector<T>& x) {
    return a * std::span<const T>(x);
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void check_finite() const {
    for (const auto& v : data_) {
      if (!detail::is_finite(v)) {
        throw Error(ErrorCode::NonFinite, "matrix entries must be finite");
      }
    }
  }

  void require_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "shape mismatch " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<Complex>;

/// Direct sum A ⊕ B.
template <typename T>
DenseMatrix<T> direct_sum(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

/// ‖A − B‖_max.
template <typename T>
double max_abs_diff(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  return (a - b).max_abs();
}

/// max |A_ij − A_ji| relative to ‖A‖_max (0 for the zero matrix).
double symmetry_defect(const Matrix& a);
double hermiticity_defect(const ComplexMatrix& a);

Matrix symmetrized(const Matrix& a);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
double dot(std::span<const double> a, std::span<const double> b);
double norm_inf(std::span<const double> a);
double norm2(std::span<const double> a);

void require_finite(std::span<const double> v, const char* what);

}  // namespace symplectica
