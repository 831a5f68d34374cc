#pragma once

// Phase-space dynamics of time-independent quadratic Hamiltonians
//
//   H(x) = ½ x·Hx + x·ξ + H₀,   x = (q1..qn, p1..pn),
//
// with flow ẋ = J∇H. Includes exact propagators along three routes
// (matrix exponential, normal modes, augmented exponential for singular H),
// the normal-mode frame, the complex (ladder) representation, the
// small-oscillation expansion of smooth Hamiltonians and the Lagrangian
// cross-check.

#include <functional>
#include <optional>

#include "symplectica/symplectic.hpp"

namespace symplectica {

class QuadraticHamiltonian {
 public:
  QuadraticHamiltonian(Matrix hessian, Vector xi, double h0 = 0.0,
                       double symmetry_tol = 1e-10);
  /// ξ = 0, H₀ = 0.
  explicit QuadraticHamiltonian(Matrix hessian);

  std::size_t dof() const noexcept { return hessian_.rows() / 2; }
  std::size_t dim() const noexcept { return hessian_.rows(); }
  const Matrix& hessian() const noexcept { return hessian_; }
  const Vector& xi() const noexcept { return xi_; }
  double h0() const noexcept { return h0_; }

  /// The same Hamiltonian in coordinates x = S·y for symplectic S:
  /// Hessian SᵀHS, linear term Sᵀξ, offset unchanged.
  QuadraticHamiltonian transformed(const Matrix& s, double tol = 1e-8) const;

 private:
  Matrix hessian_;
  Vector xi_;
  double h0_;
};

struct DynamicsTolerances {
  SymplecticTolerances symplectic{};
  /// Hessians with min |eigenvalue| ≤ singular·max |eigenvalue| are singular.
  double singular = 1e-12;
};

double energy(const QuadraticHamiltonian& qh, std::span<const double> x);

/// x★ = −H⁻¹ξ. Throws SingularHessian when H is (numerically) singular.
Vector fixed_point(const QuadraticHamiltonian& qh, const DynamicsTolerances& tol = {});

/// S_t = exp(J·H·t).
Matrix propagator(const QuadraticHamiltonian& qh, double t);

/// x(t) = S_t(x₀ + H⁻¹ξ) − H⁻¹ξ; requires det H ≠ 0.
Vector evolve(const QuadraticHamiltonian& qh, std::span<const double> x0, double t,
              const DynamicsTolerances& tol = {});

/// x(t) = S_t x₀ + ∫₀ᵗ S_τ Jξ dτ from exp([[JH, Jξ], [0, 0]]·t); valid for
/// any H, including singular ones.
Vector evolve_generic(const QuadraticHamiltonian& qh, std::span<const double> x0, double t);

struct NormalModeFrame {
  /// S_H with S_H·H·S_Hᵀ = Λ.
  Matrix s;
  Vector spectrum;
  Vector x_star;
  /// S_H^{-T}·x★
  Vector x_star_prime;
  double h0_prime = 0.0;

  std::size_t dof() const noexcept { return spectrum.size(); }
  Matrix lambda() const { return williamson_diagonal(spectrum); }
};

NormalModeFrame normal_mode_frame(const QuadraticHamiltonian& qh,
                                  const DynamicsTolerances& tol = {});

/// x′ = S_H^{-T}·x
Vector to_normal_modes(const NormalModeFrame& frame, std::span<const double> x);
/// x = S_Hᵀ·x′
Vector from_normal_modes(const NormalModeFrame& frame, std::span<const double> xp);

/// ½(x′−x′★)·Λ(x′−x′★) + H₀′
double normal_mode_energy(const NormalModeFrame& frame, std::span<const double> xp);

/// S′_t = cos(Λt) + J·sin(Λt).
Matrix normal_mode_propagator(const NormalModeFrame& frame, double t);

Vector evolve_via_modes(const NormalModeFrame& frame, std::span<const double> x0, double t);
Vector evolve_via_modes(const QuadraticHamiltonian& qh, std::span<const double> x0, double t,
                        const DynamicsTolerances& tol = {});

/// Complex representation z = W·Z·x of phase space.
struct LadderFrame {
  /// (1/√2)[[I, iI], [iI, I]]
  ComplexMatrix w;
  /// diag(√(m ω), 1/√(m ω))
  Matrix z;
  /// S̃_H = W·(S_H·Z)·W*
  ComplexMatrix bogoliubov;
  /// H̃ = (W Z⁻¹) H (W Z⁻¹)†
  ComplexMatrix complex_hessian;
  Vector spectrum;
};

/// W for n degrees of freedom.
ComplexMatrix complex_symplectic_unitary(std::size_t n);

LadderFrame ladder_frame(const NormalModeFrame& frame, const QuadraticHamiltonian& qh,
                         std::span<const double> masses,
                         std::span<const double> frequencies);

/// W·S′_t·W*; diagonal with entries e^{−iμk t} (first block), e^{+iμk t}.
ComplexMatrix complex_propagator(const NormalModeFrame& frame, double t);

/// Smooth Hamiltonian on 2n-dimensional phase space. The gradient is
/// optional; central differences are used when it is absent.
struct SmoothField {
  std::function<double(std::span<const double>)> value;
  std::function<Vector(std::span<const double>)> gradient;
};

struct SmallOscillationOptions {
  int max_newton_steps = 100;
  int max_halvings = 20;
  /// Convergence: ‖∇H‖_∞ ≤ gradient_tol·max(1, ‖Hessian‖_max).
  double gradient_tol = 1e-8;
  DynamicsTolerances dynamics{};
};

struct SmallOscillationResult {
  /// Quadratic model in displacement coordinates y = x − x★: Hessian at x★,
  /// ξ = 0, H₀ = H(x★).
  QuadraticHamiltonian model;
  Vector x_star;
  bool positive_definite = false;
  int newton_steps = 0;
  double gradient_norm = 0.0;

  /// The same model written in the original coordinates x.
  QuadraticHamiltonian in_original_coordinates() const;
};

SmallOscillationResult small_oscillations(const SmoothField& field,
                                          std::span<const double> guess,
                                          const SmallOscillationOptions& options = {});

/// Central-difference gradient with per-coordinate step max(1,|xi|)·ε^{1/3}.
Vector numerical_gradient(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x);

/// Hessian at x: central differences of the gradient when one is supplied,
/// otherwise second differences of the value; symmetrized.
Matrix numerical_hessian(const SmoothField& field, std::span<const double> x);

/// Normal-mode frequencies from kinetic (mass) matrix T and potential U:
/// square roots of the eigenvalues of T^{-1/2} U T^{-1/2}, ascending.
Vector lagrangian_modes(const Matrix& kinetic, const Matrix& potential,
                        const KernelTolerances& tol = {});

}  // namespace symplectica
