#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symplectica/dynamics.hpp"
#include "symplectica/linalg.hpp"
#include "test_support.hpp"

using namespace symplectica;
using namespace symplectica::testing;

namespace {

// Two ions in harmonic traps centred at ∓d/2 with Coulomb repulsion C/r.
// Phase-space coordinates (q1, q2, p1, p2), unit mass.
SmoothField ion_field(double w, double c, double d) {
  SmoothField f;
  f.value = [=](std::span<const double> x) {
    const double r = x[1] - x[0];
    return 0.5 * (x[2] * x[2] + x[3] * x[3]) +
           0.5 * w * w * ((x[0] + 0.5 * d) * (x[0] + 0.5 * d) + (x[1] - 0.5 * d) * (x[1] - 0.5 * d)) +
           c / r;
  };
  f.gradient = [=](std::span<const double> x) {
    const double r = x[1] - x[0];
    const double coulomb = c / (r * r);
    return Vector{w * w * (x[0] + 0.5 * d) + coulomb, w * w * (x[1] - 0.5 * d) - coulomb,
                  x[2], x[3]};
  };
  return f;
}

// Positive root of r³ − d r² − 2C/w² = 0, the equilibrium separation.
double equilibrium_separation(double w, double c, double d) {
  double r = d + 1.0;
  for (int i = 0; i < 100; ++i) {
    const double f = w * w * (r * r * r - d * r * r) - 2.0 * c;
    const double fp = w * w * (3.0 * r * r - 2.0 * d * r);
    r -= f / fp;
  }
  return r;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("energy and fixed point") {
  const QuadraticHamiltonian qh(intro_hessian(4.0, 1.0));
  CHECK(energy(qh, Vector{1.0, 1.0}) == doctest::Approx(4.0));
  const QuadraticHamiltonian lin(Matrix{{2.0, 0.0}, {0.0, 1.0}}, Vector{-2.0, 1.0}, 3.0);
  const Vector xs = fixed_point(lin);
  CHECK(vec_max_diff(xs, Vector{1.0, -1.0}) < 1e-15);
  // H(x★) = H₀ − ½ξ·H⁻¹ξ = 3 − ½(2 + 1).
  CHECK(energy(lin, xs) == doctest::Approx(1.5));
  try {
    fixed_point(QuadraticHamiltonian(Matrix::zeros(2, 2), Vector{0.0, -1.0}));
    FAIL("expected SingularHessian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularHessian);
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(QuadraticHamiltonian(Matrix::identity(3)), Error);
  CHECK_THROWS_AS(QuadraticHamiltonian(Matrix::identity(2), Vector{1.0}), Error);
  CHECK_THROWS_AS(QuadraticHamiltonian(Matrix{{1.0, 0.3}, {0.0, 1.0}}), Error);
}

TEST_CASE("harmonic oscillator propagator is a rotation") {
  const QuadraticHamiltonian qh(Matrix::identity(2) * 2.0);
  for (double t : {0.1, 1.0, -3.0}) {
    const Matrix s = propagator(qh, t);
    const Matrix expected{{std::cos(2 * t), std::sin(2 * t)}, {-std::sin(2 * t), std::cos(2 * t)}};
    CHECK(max_abs_diff(s, expected) < 1e-13);
  }
  // q̇ = ∂H/∂p: starting at q=1, p=0 the position falls as cos(2t).
  const Vector x = evolve(qh, Vector{1.0, 0.0}, 0.25);
  CHECK(x[0] == doctest::Approx(std::cos(0.5)));
  CHECK(x[1] == doctest::Approx(-std::sin(0.5)));
}

TEST_CASE("free fall via the generic route") {
  const QuadraticHamiltonian qh(Matrix::zeros(2, 2), Vector{0.0, -1.0});
  for (double t : {0.5, 2.0, -4.0}) {
    const Vector x = evolve_generic(qh, Vector{0.3, 0.7}, t);
    // x(t) = x₀ + tJξ with Jξ = (−1, 0).
    CHECK(vec_max_diff(x, Vector{0.3 - t, 0.7}) < 1e-14);
  }
  CHECK_THROWS_AS(evolve(qh, Vector{0.3, 0.7}, 1.0), Error);
}

TEST_CASE("routes agree and conserve energy on random models") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const QuadraticHamiltonian qh(random_spd(2 * n, rng), random_vector(2 * n, rng), 0.5);
    const NormalModeFrame frame = normal_mode_frame(qh);
    const Vector x0 = random_vector(2 * n, rng);
    const double e0 = energy(qh, x0);
    for (double t : {-6.0, -0.7, 0.0, 1.3, 8.0}) {
      const Vector a = evolve(qh, x0, t);
      const Vector b = evolve_via_modes(frame, x0, t);
      const Vector c = evolve_generic(qh, x0, t);
      CHECK(vec_max_diff(a, b) < 1e-9);
      CHECK(vec_max_diff(a, c) < 1e-9);
      CHECK(std::abs(energy(qh, a) - e0) < 1e-9 * std::max(1.0, std::abs(e0)));
      CHECK(is_symplectic(propagator(qh, t)).symplectic);
    }
  }
}

TEST_CASE("normal-mode frame separates the energy") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const QuadraticHamiltonian qh(random_spd(2 * n, rng), random_vector(2 * n, rng), -1.0);
    const NormalModeFrame f = normal_mode_frame(qh);
    CHECK(energy(qh, f.x_star) == doctest::Approx(f.h0_prime).epsilon(1e-12));
    const Vector xs_ref = solve(qh.hessian(), qh.xi());
    CHECK(vec_max_diff(f.x_star, -1.0 * xs_ref) < 1e-12);
    const Vector x = random_vector(2 * n, rng, 2.0);
    const Vector xp = to_normal_modes(f, x);
    CHECK(normal_mode_energy(f, xp) == doctest::Approx(energy(qh, x)).epsilon(1e-11));
    CHECK(vec_max_diff(from_normal_modes(f, xp), x) < 1e-11);
    // Hessian in the new frame is Λ.
    const QuadraticHamiltonian moved = qh.transformed(f.s.transpose());
    CHECK(max_abs_diff(moved.hessian(), f.lambda()) < 1e-10);
  }
}

TEST_CASE("ladder frame and complex propagator") {
  for (std::size_t n : {1u, 3u}) {
    const ComplexMatrix w = complex_symplectic_unitary(n);
    CHECK(max_abs_diff(w * w.adjoint(), ComplexMatrix::identity(2 * n)) < 1e-15);
    CHECK(max_abs_diff(w, w.transpose()) == 0.0);
    const ComplexMatrix j(symplectic_form(n));
    CHECK(max_abs_diff(w.transpose() * j * w, j) < 1e-15);
  }

  const QuadraticHamiltonian qh(squeezing_hessian(5.0, 1.0, 3.0));
  const NormalModeFrame f = normal_mode_frame(qh);
  const double t = 0.37;
  const ComplexMatrix u = complex_propagator(f, t);
  for (std::size_t k = 0; k < 3; ++k) {
    const Complex phase = std::polar(1.0, f.spectrum[k] * t);
    CHECK(std::abs(u(k, k) - std::conj(phase)) < 1e-14);
    CHECK(std::abs(u(3 + k, 3 + k) - phase) < 1e-14);
  }
  CHECK(std::abs(u(0, 3)) < 1e-15);

  const Vector ones{1.0, 1.0, 1.0};
  const LadderFrame lf = ladder_frame(f, qh, ones, ones);
  // Unit masses and frequencies: Z = I and the complex Hessian is W H W†.
  const ComplexMatrix wh = lf.w * ComplexMatrix(qh.hessian()) * lf.w.adjoint();
  CHECK(max_abs_diff(lf.complex_hessian, wh) < 1e-14);
  CHECK(hermiticity_defect(lf.complex_hessian) < 1e-14);
  CHECK_THROWS_AS(ladder_frame(f, qh, Vector{1.0}, ones), Error);
}

TEST_CASE("small oscillations of an exact quadratic") {
  std::mt19937_64 rng(33);
  const Matrix h = random_spd(4, rng);
  const Vector xi = random_vector(4, rng);
  const QuadraticHamiltonian qh(h, xi, 2.0);
  SmoothField field;
  field.value = [&](std::span<const double> x) { return energy(qh, x); };
  const auto r = small_oscillations(field, Vector(4, 0.0));
  CHECK(r.positive_definite);
  CHECK(vec_max_diff(r.x_star, fixed_point(qh)) < 1e-7);
  CHECK(max_abs_diff(r.model.hessian(), h) < 1e-5);
  CHECK(r.model.h0() == doctest::Approx(energy(qh, fixed_point(qh))).epsilon(1e-10));
  const QuadraticHamiltonian back = r.in_original_coordinates();
  CHECK(vec_max_diff(back.xi(), xi) < 1e-4);
  CHECK(back.h0() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("small oscillations of two trapped ions") {
  const double w = 1.0;
  const double c = 2.0;
  for (double d : {1.0, 2.0, 3.5}) {
    const auto r = small_oscillations(ion_field(w, c, d), Vector{-0.5 * d, 0.5 * d, 0.0, 0.0});
    REQUIRE(r.positive_definite);
    const double sep = equilibrium_separation(w, c, d);
    CHECK(r.x_star[1] - r.x_star[0] == doctest::Approx(sep).epsilon(1e-9));
    const Vector mu = symplectic_spectrum(r.model.hessian());
    CHECK(mu[0] == doctest::Approx(w).epsilon(1e-7));
    CHECK(mu[1] == doctest::Approx(std::sqrt(w * w + 4.0 * c / (sep * sep * sep))).epsilon(1e-7));
  }
  // Trap separation 1 puts the ions exactly 2 apart and gives {1, √2}.
  CHECK(equilibrium_separation(1.0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("small oscillations without an analytic gradient") {
  SmoothField f = ion_field(1.0, 2.0, 1.0);
  f.gradient = nullptr;
  const auto r = small_oscillations(f, Vector{-0.6, 0.6, 0.1, 0.0});
  const Vector mu = symplectic_spectrum(r.model.hessian());
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(mu[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("small oscillations failure modes") {
  SmoothField flat;
  flat.value = [](std::span<const double> x) { return x[0] + 0.0 * x[1]; };
  try {
    small_oscillations(flat, Vector{0.0, 0.0});
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularJacobian);
  }
  CHECK_THROWS_AS(small_oscillations(flat, Vector{0.0}), Error);

  // A saddle is found but flagged.
  SmoothField saddle;
  saddle.value = [](std::span<const double> x) { return 0.5 * x[0] * x[0] - 0.5 * x[1] * x[1]; };
  const auto r = small_oscillations(saddle, Vector{0.2, 0.3});
  CHECK_FALSE(r.positive_definite);
}

TEST_CASE("trapped-ion Hessian and the attractive collapse") {
  const Matrix h = trapped_ion_hessian(1.0, 1.0, 2.0, 2.0);
  const Vector mu = symplectic_spectrum(h);
  CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mu[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  const Vector lag = lagrangian_modes(Matrix::identity(2), h.block(0, 0, 2, 2));
  CHECK(vec_max_diff(lag, mu) < 1e-13);
  // C < 0 with |C| beyond md³ϖ²/4 drives the relative mode unstable.
  CHECK_THROWS_AS(normal_mode_frame(QuadraticHamiltonian(trapped_ion_hessian(1.0, 1.0, -3.0, 2.0))),
                  NotPositiveDefiniteError);
  CHECK_FALSE(is_positive_definite(trapped_ion_hessian(1.0, 1.0, -3.0, 2.0)).positive_definite);
}

TEST_CASE("lagrangian modes match the symplectic spectrum of U ⊕ T⁻¹") {
  std::mt19937_64 rng(34);
  for (std::size_t n : {1u, 2u, 4u}) {
    const Matrix t = random_spd(n, rng);
    const Matrix u = random_spd(n, rng);
    const Vector lag = lagrangian_modes(t, u);
    const Vector mu = symplectic_spectrum(direct_sum(u, inverse(t)));
    CHECK(vec_max_rel_diff(lag, mu) < 1e-11);
  }
  CHECK_THROWS_AS(lagrangian_modes(Matrix::identity(2), Matrix{{1.0, 0.0}, {0.0, -1.0}}), Error);
}

TEST_CASE("numerical derivatives") {
  const auto f = [](std::span<const double> x) { return std::sin(x[0]) * std::exp(x[1]); };
  const Vector g = numerical_gradient(f, Vector{0.4, -0.2});
  CHECK(g[0] == doctest::Approx(std::cos(0.4) * std::exp(-0.2)).epsilon(1e-9));
  CHECK(g[1] == doctest::Approx(std::sin(0.4) * std::exp(-0.2)).epsilon(1e-9));
  SmoothField field;
  field.value = f;
  const Matrix h = numerical_hessian(field, Vector{0.4, -0.2});
  CHECK(h(0, 0) == doctest::Approx(-std::sin(0.4) * std::exp(-0.2)).epsilon(1e-6));
  CHECK(h(0, 1) == doctest::Approx(std::cos(0.4) * std::exp(-0.2)).epsilon(1e-6));
  CHECK(h(0, 1) == h(1, 0));
}

}
