#include "symplectica/statmech.hpp"

#include <cmath>

namespace symplectica {

void ThermalModel::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be positive and finite");
  }
  if (!(kb > 0.0) || !std::isfinite(kb)) {
    throw Error(ErrorCode::InvalidArgument, "kB must be positive and finite");
  }
}

double log_two_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)); }

double x2_csch2(double x) {
  if (x < 1e-4) return 1.0 - x * x / 3.0;
  const double e = std::exp(-2.0 * x);
  const double d = -std::expm1(-2.0 * x);
  return 4.0 * x * x * e / (d * d);
}

ThermalSpectrum thermal_spectrum(const QuadraticHamiltonian& qh,
                                 const DynamicsTolerances& tol) {
  ThermalSpectrum s;
  s.mu = symplectic_spectrum(qh.hessian(), tol.symplectic);
  const Vector hinv_xi = solve(qh.hessian(), qh.xi());
  s.h0_prime = qh.h0() - 0.5 * dot(qh.xi(), hinv_xi);
  return s;
}

namespace {

PartitionFunction from_log(double log_z) {
  PartitionFunction p{log_z, std::nullopt};
  const double z = std::exp(log_z);
  if (std::isfinite(z) && z > 0.0) p.z = z;
  return p;
}

void check_params(double beta, double hbar) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidArgument, "hbar must be positive and finite");
  }
}

}  // namespace

PartitionFunction partition_function(const ThermalSpectrum& spec, double beta, double hbar) {
  check_params(beta, hbar);
  double log_z = -beta * spec.h0_prime;
  for (double mu : spec.mu) log_z -= log_two_sinh(0.5 * beta * hbar * mu);
  return from_log(log_z);
}

PartitionFunction partition_function(const ThermalModel& model) {
  model.validate();
  return partition_function(thermal_spectrum(model.qh), model.beta, model.hbar);
}

ThermoReport thermo_report(const ThermalSpectrum& spec, double beta, double hbar, double kb) {
  check_params(beta, hbar);
  if (!(kb > 0.0)) throw Error(ErrorCode::InvalidArgument, "kB must be positive");
  ThermoReport r;
  r.beta = beta;
  r.partition = partition_function(spec, beta, hbar);
  double u = spec.h0_prime;
  double c = 0.0;
  for (double mu : spec.mu) {
    const double y = 0.5 * beta * hbar * mu;
    u += 0.5 * hbar * mu / std::tanh(y);
    c += kb * x2_csch2(y);
  }
  r.internal_energy = u;
  r.free_energy = -r.partition.log_z / beta;
  r.entropy = kb * beta * (r.internal_energy - r.free_energy);
  r.heat_capacity = c;
  return r;
}

ThermoReport thermo_report(const ThermalModel& model) {
  model.validate();
  return thermo_report(thermal_spectrum(model.qh), model.beta, model.hbar, model.kb);
}

PartitionFunction classical_partition_function(const ThermalSpectrum& spec, double beta,
                                               double hbar) {
  check_params(beta, hbar);
  double log_z = -beta * spec.h0_prime;
  for (double mu : spec.mu) log_z -= std::log(beta * hbar * mu);
  return from_log(log_z);
}

PartitionFunction classical_partition_function(const ThermalModel& model) {
  model.validate();
  return classical_partition_function(thermal_spectrum(model.qh), model.beta, model.hbar);
}

Vector occupation_numbers(const ThermalSpectrum& spec, double beta, double hbar) {
  check_params(beta, hbar);
  Vector nu(spec.mu.size());
  for (std::size_t k = 0; k < nu.size(); ++k) {
    nu[k] = 1.0 / std::expm1(beta * hbar * spec.mu[k]);
  }
  return nu;
}

Matrix thermal_covariance(const ThermalModel& model, const DynamicsTolerances& tol) {
  model.validate();
  const WilliamsonResult w = williamson(model.qh.hessian(), tol.symplectic);
  const std::size_t n = w.dof();
  Vector d(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = 0.5 * model.hbar / std::tanh(0.5 * model.beta * model.hbar * w.spectrum[k]);
    d[k] = v;
    d[n + k] = v;
  }
  return symmetrized(w.s.transpose() * Matrix::diagonal(d) * w.s);
}

}  // namespace symplectica
