#include "symplectica/dynamics.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

namespace symplectica {

QuadraticHamiltonian::QuadraticHamiltonian(Matrix hessian, Vector xi, double h0,
                                           double symmetry_tol)
    : hessian_(std::move(hessian)), xi_(std::move(xi)), h0_(h0) {
  if (!hessian_.is_square() || hessian_.rows() == 0 || hessian_.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension,
                "Hessian must be 2n x 2n with n >= 1, got " + hessian_.shape());
  }
  require_symmetric(hessian_, symmetry_tol, "Hessian");
  hessian_ = symmetrized(hessian_);
  if (xi_.size() != hessian_.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "linear term has " + std::to_string(xi_.size()) + " entries, expected " +
                    std::to_string(hessian_.rows()));
  }
  require_finite(xi_, "linear term");
  if (!std::isfinite(h0_)) throw Error(ErrorCode::NonFinite, "offset must be finite");
}

QuadraticHamiltonian::QuadraticHamiltonian(Matrix hessian)
    : QuadraticHamiltonian(hessian, Vector(hessian.rows(), 0.0), 0.0) {}

QuadraticHamiltonian QuadraticHamiltonian::transformed(const Matrix& s, double tol) const {
  return QuadraticHamiltonian(symplectic_congruence(hessian_, s, tol), s.transpose() * xi_,
                              h0_);
}

namespace {

void require_dim(const QuadraticHamiltonian& qh, std::span<const double> x, const char* what) {
  if (x.size() != qh.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has " +
                                                  std::to_string(x.size()) +
                                                  " entries, expected " +
                                                  std::to_string(qh.dim()));
  }
}

Matrix transpose_inverse(const Matrix& s) { return symplectic_inverse(s).transpose(); }

}  // namespace

double energy(const QuadraticHamiltonian& qh, std::span<const double> x) {
  require_dim(qh, x, "phase-space point");
  const Vector hx = qh.hessian() * x;
  return 0.5 * dot(x, hx) + dot(x, qh.xi()) + qh.h0();
}

Vector fixed_point(const QuadraticHamiltonian& qh, const DynamicsTolerances& tol) {
  const Vector ev = sym_eigenvalues(qh.hessian(), tol.symplectic.kernel);
  double lo = INFINITY;
  double hi = 0.0;
  for (double v : ev) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (hi == 0.0 || lo <= tol.singular * hi) {
    std::ostringstream os;
    os << "Hessian is singular (min |eigenvalue| " << lo
       << "); use evolve_generic for the affine flow";
    throw Error(ErrorCode::SingularHessian, os.str());
  }
  Vector x = solve(qh.hessian(), qh.xi());
  for (double& v : x) v = 0.0 - v;
  return x;
}

Matrix propagator(const QuadraticHamiltonian& qh, double t) {
  return expm(symplectic_form(qh.dof()) * qh.hessian() * t);
}

Vector evolve(const QuadraticHamiltonian& qh, std::span<const double> x0, double t,
              const DynamicsTolerances& tol) {
  require_dim(qh, x0, "initial condition");
  const Vector xs = fixed_point(qh, tol);
  const Vector x0v(x0.begin(), x0.end());
  return propagator(qh, t) * (x0v - xs) + xs;
}

Vector evolve_generic(const QuadraticHamiltonian& qh, std::span<const double> x0, double t) {
  require_dim(qh, x0, "initial condition");
  const std::size_t dim = qh.dim();
  const Matrix j = symplectic_form(qh.dof());
  Matrix aug(dim + 1, dim + 1);
  aug.set_block(0, 0, j * qh.hessian());
  const Vector jxi = j * qh.xi();
  for (std::size_t i = 0; i < dim; ++i) aug(i, dim) = jxi[i];
  const Matrix e = expm(aug * t);
  Vector x(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double s = e(i, dim);
    for (std::size_t k = 0; k < dim; ++k) s += e(i, k) * x0[k];
    x[i] = s;
  }
  return x;
}

NormalModeFrame normal_mode_frame(const QuadraticHamiltonian& qh,
                                  const DynamicsTolerances& tol) {
  const WilliamsonResult w = williamson(qh.hessian(), tol.symplectic);
  NormalModeFrame f;
  f.s = w.s;
  f.spectrum = w.spectrum;
  f.x_star = fixed_point(qh, tol);
  f.x_star_prime = transpose_inverse(f.s) * f.x_star;
  const Vector lx = f.lambda() * f.x_star_prime;
  f.h0_prime = qh.h0() - 0.5 * dot(f.x_star_prime, lx);
  return f;
}

Vector to_normal_modes(const NormalModeFrame& frame, std::span<const double> x) {
  return transpose_inverse(frame.s) * x;
}

Vector from_normal_modes(const NormalModeFrame& frame, std::span<const double> xp) {
  return frame.s.transpose() * xp;
}

double normal_mode_energy(const NormalModeFrame& frame, std::span<const double> xp) {
  const std::size_t n = frame.dof();
  if (xp.size() != 2 * n) {
    throw Error(ErrorCode::DimensionMismatch, "normal-mode point has wrong dimension");
  }
  double e = frame.h0_prime;
  for (std::size_t k = 0; k < n; ++k) {
    const double dq = xp[k] - frame.x_star_prime[k];
    const double dp = xp[n + k] - frame.x_star_prime[n + k];
    e += 0.5 * frame.spectrum[k] * (dq * dq + dp * dp);
  }
  return e;
}

Matrix normal_mode_propagator(const NormalModeFrame& frame, double t) {
  const std::size_t n = frame.dof();
  Matrix r(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = std::cos(frame.spectrum[k] * t);
    const double s = std::sin(frame.spectrum[k] * t);
    r(k, k) = c;
    r(n + k, n + k) = c;
    r(k, n + k) = s;
    r(n + k, k) = -s;
  }
  return r;
}

Vector evolve_via_modes(const NormalModeFrame& frame, std::span<const double> x0, double t) {
  if (x0.size() != 2 * frame.dof()) {
    throw Error(ErrorCode::DimensionMismatch, "initial condition has wrong dimension");
  }
  const Vector x0v(x0.begin(), x0.end());
  const Vector d = to_normal_modes(frame, x0v - frame.x_star);
  return from_normal_modes(frame, normal_mode_propagator(frame, t) * d) + frame.x_star;
}

Vector evolve_via_modes(const QuadraticHamiltonian& qh, std::span<const double> x0, double t,
                        const DynamicsTolerances& tol) {
  require_dim(qh, x0, "initial condition");
  return evolve_via_modes(normal_mode_frame(qh, tol), x0, t);
}

ComplexMatrix complex_symplectic_unitary(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "W needs n >= 1");
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix w(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    w(k, k) = r;
    w(n + k, n + k) = r;
    w(k, n + k) = Complex(0.0, r);
    w(n + k, k) = Complex(0.0, r);
  }
  return w;
}

LadderFrame ladder_frame(const NormalModeFrame& frame, const QuadraticHamiltonian& qh,
                         std::span<const double> masses,
                         std::span<const double> frequencies) {
  const std::size_t n = frame.dof();
  if (qh.dof() != n) throw Error(ErrorCode::DimensionMismatch, "frame/Hamiltonian mismatch");
  if (masses.size() != n || frequencies.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "need one mass and one frequency per mode");
  }
  Vector zdiag(2 * n);
  Vector zinv(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(masses[k] > 0.0) || !(frequencies[k] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "masses and frequencies must be positive");
    }
    const double r = std::sqrt(masses[k] * frequencies[k]);
    zdiag[k] = r;
    zdiag[n + k] = 1.0 / r;
    zinv[k] = 1.0 / r;
    zinv[n + k] = r;
  }
  LadderFrame lf;
  lf.w = complex_symplectic_unitary(n);
  lf.z = Matrix::diagonal(zdiag);
  lf.spectrum = frame.spectrum;
  const ComplexMatrix w_conj = lf.w.conjugate();
  lf.bogoliubov = lf.w * ComplexMatrix(frame.s * lf.z) * w_conj;
  const ComplexMatrix wz = lf.w * ComplexMatrix(Matrix::diagonal(zinv));
  lf.complex_hessian = wz * ComplexMatrix(qh.hessian()) * wz.adjoint();
  return lf;
}

ComplexMatrix complex_propagator(const NormalModeFrame& frame, double t) {
  const ComplexMatrix w = complex_symplectic_unitary(frame.dof());
  return w * ComplexMatrix(normal_mode_propagator(frame, t)) * w.conjugate();
}

Vector numerical_gradient(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x) {
  const double base = std::cbrt(DBL_EPSILON);
  Vector g(x.size());
  Vector xp(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = std::max(1.0, std::abs(x[i])) * base;
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix numerical_hessian(const SmoothField& field, std::span<const double> x) {
  const std::size_t dim = x.size();
  Matrix h(dim, dim);
  Vector xp(x.begin(), x.end());
  if (field.gradient) {
    const double base = std::cbrt(DBL_EPSILON);
    for (std::size_t j = 0; j < dim; ++j) {
      const double step = std::max(1.0, std::abs(x[j])) * base;
      xp[j] = x[j] + step;
      const Vector gp = field.gradient(xp);
      xp[j] = x[j] - step;
      const Vector gm = field.gradient(xp);
      xp[j] = x[j];
      for (std::size_t i = 0; i < dim; ++i) h(i, j) = (gp[i] - gm[i]) / (2.0 * step);
    }
    return symmetrized(h);
  }
  const double base = std::sqrt(std::sqrt(DBL_EPSILON));
  Vector steps(dim);
  for (std::size_t i = 0; i < dim; ++i) steps[i] = std::max(1.0, std::abs(x[i])) * base;
  auto f_at = [&](std::size_t i, double si, std::size_t j, double sj) {
    xp[i] += si * steps[i];
    xp[j] += sj * steps[j];
    const double v = field.value(xp);
    xp[i] = x[i];
    xp[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = (f_at(i, 1, j, 1) - f_at(i, 1, j, -1) - f_at(i, -1, j, 1) +
                        f_at(i, -1, j, -1)) /
                       (4.0 * steps[i] * steps[j]);
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

QuadraticHamiltonian SmallOscillationResult::in_original_coordinates() const {
  const Vector hx = model.hessian() * x_star;
  return QuadraticHamiltonian(model.hessian(), -1.0 * hx,
                              model.h0() + 0.5 * dot(x_star, hx));
}

SmallOscillationResult small_oscillations(const SmoothField& field,
                                          std::span<const double> guess,
                                          const SmallOscillationOptions& options) {
  if (!field.value) throw Error(ErrorCode::InvalidArgument, "field has no value callback");
  if (guess.empty() || guess.size() % 2 != 0) {
    throw Error(ErrorCode::OddDimension, "phase-space guess must have even dimension");
  }
  require_finite(guess, "guess");
  auto gradient = [&](std::span<const double> x) {
    return field.gradient ? field.gradient(x) : numerical_gradient(field.value, x);
  };

  Vector x(guess.begin(), guess.end());
  Vector g = gradient(x);
  double gnorm = norm_inf(g);
  Matrix hess = numerical_hessian(field, x);
  int steps = 0;
  for (;; ++steps) {
    if (gnorm <= options.gradient_tol * std::max(1.0, hess.max_abs())) break;
    if (steps >= options.max_newton_steps) {
      std::ostringstream os;
      os << "Newton search did not converge in " << options.max_newton_steps
         << " steps (|grad| = " << gnorm << ")";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
    const LuDecomposition lu(hess);
    if (lu.singular() || lu.pivot_ratio() < DBL_EPSILON) {
      throw Error(ErrorCode::SingularJacobian, "Hessian is singular during Newton search");
    }
    const Vector dx = lu.solve(g);
    double lambda = 1.0;
    Vector trial;
    Vector gtrial;
    double tnorm = INFINITY;
    for (int h = 0; h <= options.max_halvings; ++h) {
      trial = x - lambda * dx;
      gtrial = gradient(trial);
      tnorm = norm_inf(gtrial);
      if (tnorm < gnorm) break;
      lambda *= 0.5;
    }
    x = std::move(trial);
    g = std::move(gtrial);
    gnorm = tnorm;
    hess = numerical_hessian(field, x);
  }

  const double h_star = field.value(x);
  SmallOscillationResult r{QuadraticHamiltonian(hess, Vector(x.size(), 0.0), h_star,
                                                1e-6),
                           x, false, steps, gnorm};
  r.positive_definite =
      is_positive_definite(hess, options.dynamics.symplectic.kernel.positivity,
                           options.dynamics.symplectic.kernel)
          .positive_definite;
  return r;
}

Vector lagrangian_modes(const Matrix& kinetic, const Matrix& potential,
                        const KernelTolerances& tol) {
  if (kinetic.rows() != potential.rows() || !kinetic.is_square() || !potential.is_square()) {
    throw Error(ErrorCode::DimensionMismatch,
                "kinetic " + kinetic.shape() + " vs potential " + potential.shape());
  }
  require_symmetric(kinetic, tol.symmetry, "kinetic matrix");
  require_symmetric(potential, tol.symmetry, "potential matrix");
  require_positive_definite(potential, "potential matrix", tol);
  const Matrix t_inv_root = inv_sqrt_spd(kinetic, tol);
  const Vector u = sym_eigenvalues(symmetrized(t_inv_root * potential * t_inv_root), tol);
  Vector freq(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) freq[k] = std::sqrt(u[k]);
  return freq;
}

}  // namespace symplectica
