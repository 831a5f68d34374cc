#include <cmath>
#include <numbers>

#include "doctest.h"
#include "symplectica/statmech.hpp"
#include "symplectica/uncertainty.hpp"
#include "test_support.hpp"

using namespace symplectica;
using namespace symplectica::testing;

namespace {

// Σ_ν e^{−β(ν+½)ħμ} over the Fock ladder, truncated.
double fock_sum(double beta, double hbar, double mu, int levels) {
  double z = 0.0;
  for (int nu = levels; nu >= 0; --nu) z += std::exp(-beta * hbar * mu * (nu + 0.5));
  return z;
}

double log_z(const ThermalSpectrum& s, double beta) {
  return partition_function(s, beta, 1.0).log_z;
}

}  // namespace

TEST_SUITE("statmech") {

TEST_CASE("single oscillator partition function") {
  const ThermalSpectrum s{{1.0}, 0.0};
  const auto z = partition_function(s, 1.0, 1.0);
  REQUIRE(z.z.has_value());
  CHECK(std::abs(*z.z - fock_sum(1.0, 1.0, 1.0, 200)) < 1e-12);
  CHECK(*z.z == doctest::Approx(0.5 / std::sinh(0.5)).epsilon(1e-15));
  CHECK(*z.z == doctest::Approx(0.959517).epsilon(1e-6));
}

TEST_CASE("partition function of a product of modes") {
  const ThermalSpectrum s{{1.0, 2.5, 0.3}, 0.7};
  for (double beta : {0.2, 1.0, 3.0}) {
    double expected = -beta * 0.7;
    for (double mu : s.mu) expected += std::log(fock_sum(beta, 1.0, mu, 4000));
    CHECK(log_z(s, beta) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("extreme temperatures stay finite") {
  const ThermalSpectrum s{{1.0, 2.0}, 0.0};
  const auto cold = partition_function(s, 1e4, 1.0);
  CHECK(cold.log_z == doctest::Approx(-1e4 * 1.5).epsilon(1e-12));
  const auto r = thermo_report(s, 1e4, 1.0);
  CHECK(r.internal_energy == doctest::Approx(1.5));
  CHECK(r.heat_capacity >= 0.0);
  CHECK(r.heat_capacity < 1e-100);
  const auto hot = thermo_report(s, 1e-8, 1.0);
  CHECK(std::isfinite(hot.partition.log_z));
  CHECK(hot.heat_capacity == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(log_two_sinh(800.0) == doctest::Approx(800.0));
  CHECK(log_two_sinh(1e-3) == doctest::Approx(std::log(2.0 * std::sinh(1e-3))).epsilon(1e-12));
}

TEST_CASE("closed forms match finite differences of log Z") {
  const ThermalSpectrum s{{0.4, 1.0, 2.7}, -0.3};
  for (double beta : {0.1, 0.8, 2.0, 6.0}) {
    const auto r = thermo_report(s, beta, 1.0);
    const double h = 1e-4 * beta;
    const double lp = log_z(s, beta + h);
    const double lm = log_z(s, beta - h);
    const double l0 = log_z(s, beta);
    const double u_fd = -(lp - lm) / (2.0 * h);
    const double c_fd = beta * beta * (lp - 2.0 * l0 + lm) / (h * h);
    CHECK(r.internal_energy == doctest::Approx(u_fd).epsilon(1e-7));
    CHECK(r.heat_capacity == doctest::Approx(c_fd).epsilon(1e-5));
    CHECK(r.free_energy == doctest::Approx(-l0 / beta).epsilon(1e-14));
    CHECK(r.entropy == doctest::Approx(beta * (r.internal_energy - r.free_energy)).epsilon(1e-12));
    CHECK(r.entropy > 0.0);
  }
}

TEST_CASE("energy, entropy and heat capacity grow with temperature") {
  const ThermalSpectrum s{{0.5, 1.5}, 0.0};
  double prev_u = -INFINITY;
  double prev_s = -INFINITY;
  for (double beta = 10.0; beta > 0.05; beta *= 0.7) {
    const auto r = thermo_report(s, beta, 1.0);
    CHECK(r.internal_energy > prev_u);
    CHECK(r.entropy > prev_s);
    CHECK(r.heat_capacity > 0.0);
    CHECK(r.heat_capacity < 2.0);
    prev_u = r.internal_energy;
    prev_s = r.entropy;
  }
}

TEST_CASE("kB and hbar scale as expected") {
  const ThermalSpectrum s{{1.3}, 0.0};
  const auto a = thermo_report(s, 0.7, 1.0, 1.0);
  const auto b = thermo_report(s, 0.7, 1.0, 2.0);
  CHECK(b.heat_capacity == doctest::Approx(2.0 * a.heat_capacity));
  CHECK(b.entropy == doctest::Approx(2.0 * a.entropy));
  CHECK(b.internal_energy == doctest::Approx(a.internal_energy));
  // Only the product βħμ enters the mode sums.
  CHECK(log_z(ThermalSpectrum{{2.6}, 0.0}, 0.7) ==
        doctest::Approx(partition_function(s, 0.7, 2.0).log_z));
}

TEST_CASE("classical limit against phase-space quadrature") {
  const Matrix h{{1.7, 0.4}, {0.4, 0.9}};
  const QuadraticHamiltonian qh(h, Vector{0.3, -0.2}, 0.1);
  const double beta = 0.8;
  // ∫∫ e^{−βH} dq dp / (2πħ) on a trapezoid grid.
  const double span = 12.0;
  const int steps = 600;
  const double dx = 2.0 * span / steps;
  double integral = 0.0;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double wgt = (i == 0 || i == steps ? 0.5 : 1.0) * (j == 0 || j == steps ? 0.5 : 1.0);
      integral += wgt * std::exp(-beta * energy(qh, Vector{-span + i * dx, -span + j * dx}));
    }
  }
  integral *= dx * dx / (2.0 * std::numbers::pi);
  const auto zc = classical_partition_function(ThermalModel{qh, beta, 1.0, 1.0});
  REQUIRE(zc.z.has_value());
  CHECK(*zc.z == doctest::Approx(integral).epsilon(5e-3));
}

TEST_CASE("quantum and classical Z converge at high temperature") {
  const ThermalSpectrum s{{1.0, 3.0}, 0.0};
  for (double x : {1e-1, 1e-2, 1e-3}) {
    const double beta = x / 3.0;
    const double ratio = std::exp(partition_function(s, beta, 1.0).log_z -
                                  classical_partition_function(s, beta, 1.0).log_z);
    // Each mode contributes y / (2 sinh(y/2)) ≈ 1 − y²/24 < 1.
    const double deficit = (x * x + x * x / 9.0) / 24.0;
    CHECK(ratio < 1.0);
    CHECK(1.0 - ratio == doctest::Approx(deficit).epsilon(x));
  }
}

TEST_CASE("thermodynamics is invariant under symplectic congruence") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const QuadraticHamiltonian qh(random_spd(2 * n, rng), random_vector(2 * n, rng), 0.2);
    const Matrix s = random_symplectic(n, rng, 0.5);
    const QuadraticHamiltonian moved = qh.transformed(s);
    for (double beta : {0.3, 2.0}) {
      const auto a = thermo_report(ThermalModel{qh, beta, 1.0, 1.0});
      const auto b = thermo_report(ThermalModel{moved, beta, 1.0, 1.0});
      CHECK(b.partition.log_z == doctest::Approx(a.partition.log_z).epsilon(1e-10));
      CHECK(b.internal_energy == doctest::Approx(a.internal_energy).epsilon(1e-10));
      CHECK(b.heat_capacity == doctest::Approx(a.heat_capacity).epsilon(1e-10));
    }
  }
}

TEST_CASE("occupation numbers and thermal covariance") {
  const ThermalSpectrum s{{1.0, 2.0}, 0.0};
  const Vector occ = occupation_numbers(s, 1.0, 1.0);
  CHECK(occ[0] == doctest::Approx(1.0 / std::expm1(1.0)));
  CHECK(occ[1] == doctest::Approx(1.0 / std::expm1(2.0)));

  const QuadraticHamiltonian qh(squeezing_hessian(5.0, 1.0, 3.0));
  for (double beta : {0.05, 1.0, 20.0}) {
    const Matrix v = thermal_covariance(ThermalModel{qh, beta, 1.0, 1.0});
    const Vector nu = symplectic_spectrum(v);
    const Vector mu = symplectic_spectrum(qh.hessian());
    // Mode j has thermal width (ħ/2)coth(βħμⱼ/2), which decreases with μ.
    for (std::size_t k = 0; k < 3; ++k) {
      const double expected = 0.5 / std::tanh(0.5 * beta * mu[2 - k]);
      CHECK(nu[k] == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(rs_check(CovarianceMatrix{v, std::nullopt}, 1.0).valid);
  }
}

TEST_CASE("invalid thermal parameters") {
  const QuadraticHamiltonian qh(Matrix::identity(2));
  CHECK_THROWS_AS(thermo_report(ThermalModel{qh, 0.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(thermo_report(ThermalModel{qh, 1.0, -1.0, 1.0}), Error);
  CHECK_THROWS_AS(partition_function(ThermalModel{qh, NAN, 1.0, 1.0}), Error);
  const QuadraticHamiltonian bad(Matrix{{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(partition_function(ThermalModel{bad, 1.0, 1.0, 1.0}), NotPositiveDefiniteError);
}

}
