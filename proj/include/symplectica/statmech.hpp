#pragma once

// Canonical-ensemble thermodynamics of quadratic Hamiltonians with a
// positive-definite Hessian. Everything depends on the Hamiltonian only
// through its symplectic spectrum μ and the offset H₀′ = H₀ − ½ξ·H⁻¹ξ.

#include <optional>

#include "symplectica/dynamics.hpp"

namespace symplectica {

struct ThermalModel {
  QuadraticHamiltonian qh;
  /// Inverse temperature 1/(kB·T), in 1/energy.
  double beta = 1.0;
  double hbar = 1.0;
  double kb = 1.0;

  void validate() const;
};

/// Symplectic spectrum and offset of a model; computing these is the only
/// expensive step, so β sweeps can reuse one.
struct ThermalSpectrum {
  Vector mu;
  double h0_prime = 0.0;
};

ThermalSpectrum thermal_spectrum(const QuadraticHamiltonian& qh,
                                 const DynamicsTolerances& tol = {});

struct PartitionFunction {
  double log_z = 0.0;
  /// exp(log_z) when finite and nonzero.
  std::optional<double> z;
};

PartitionFunction partition_function(const ThermalModel& model);
PartitionFunction partition_function(const ThermalSpectrum& spec, double beta, double hbar);

struct ThermoReport {
  double beta = 0.0;
  PartitionFunction partition;
  /// Internal energy U (energy).
  double internal_energy = 0.0;
  /// Helmholtz free energy F (energy).
  double free_energy = 0.0;
  /// Entropy S (energy/temperature).
  double entropy = 0.0;
  /// Heat capacity C = ∂U/∂T (energy/temperature).
  double heat_capacity = 0.0;
};

ThermoReport thermo_report(const ThermalModel& model);
ThermoReport thermo_report(const ThermalSpectrum& spec, double beta, double hbar,
                           double kb = 1.0);

/// Classical partition function (βħ)⁻ⁿ e^{−βH₀′} / ∏μk.
PartitionFunction classical_partition_function(const ThermalModel& model);
PartitionFunction classical_partition_function(const ThermalSpectrum& spec, double beta,
                                               double hbar);

/// ν̄j = 1/(e^{βħμj} − 1)
Vector occupation_numbers(const ThermalSpectrum& spec, double beta, double hbar);

/// V = (ħ/2)·S_Hᵀ·(Ñ ⊕ Ñ)·S_H with Ñ = diag(2ν̄j + 1).
Matrix thermal_covariance(const ThermalModel& model, const DynamicsTolerances& tol = {});

/// ln(2 sinh(x)) for x > 0 without overflow.
double log_two_sinh(double x);
/// x² csch²(x) for x > 0, stable at both ends.
double x2_csch2(double x);

}  // namespace symplectica
