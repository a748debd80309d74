#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscbus/gaussian.hpp"

namespace oscbus {

/// Rotating-wave coefficients of the external/network coupling for a set of
/// resonant normal modes (0-based network mode indices).
struct EffectiveCoefficients {
  std::vector<int> modes;
  std::vector<Attachment> attachments;
  /// D[j][k] = S_{k,μ_j} − i S_{k+N,μ_j} for attachment j and mode modes[k].
  std::vector<std::vector<Complex>> D;
  /// |D|² summed over the first a- and first b-attachment, first mode.
  double C_ab = 0.0;
  /// |D|² of every further attachment (first mode), in attachment order.
  std::vector<double> E_extra;
  /// Real position rows S_{m,α}, S_{m,β} of the first mode.
  double s_alpha = 0.0;
  double s_beta = 0.0;
  /// χ = S²_{mα} + S²_{mβ} + 1.
  double chi = 1.0;

  Complex D_bar(int attachment, int k) const { return std::conj(D[attachment][k]); }
  static double tau(double epsilon, double t) { return epsilon * t / 4.0; }
};

EffectiveCoefficients effective_coefficients(const WilliamsonDecomposition& w,
                                             std::span<const int> modes,
                                             std::span<const Attachment> attachments);

struct RWAReport {
  double eps_over_Omega = 0.0;
  double min_offresonant_detuning = 0.0;  ///< +inf when every mode is resonant
  std::vector<int> degenerate_group;      ///< 0-based network modes
  std::vector<std::string> warnings;
};

/// Reduced model over (q_a, q_b, modes…, p_a, p_b, modes…).
struct EffectiveModel {
  std::vector<int> modes;
  QuadraticForm hessian{Matrix::Identity(2, 2)};
  Matrix drift;
  Matrix diffusion;
  double zeta = 0.0;
  EffectiveCoefficients coefficients;
  RWAReport validity;

  int n_modes() const { return static_cast<int>(modes.size()) + 2; }
  int dimension() const { return 2 * n_modes(); }
  Matrix block_hq() const { return hessian.block_q(); }
  Matrix block_cqp() const { return hessian.block_c(); }
};

/// H_eff = [[h_R, −h_I], [h_I, h_R]] with the Hermitian coupling matrix
/// h = Σ_j (ε_j/4) c̄_j c_jᵀ, c_j = (−1 at the external, D at the modes).
/// Leaves drift = J H_eff and diffusion = 0. The modes must share one
/// degeneracy group under `group_tolerance` (group_degenerate_modes default).
EffectiveModel build_effective_hessian(const WilliamsonDecomposition& w,
                                       std::span<const int> modes,
                                       std::span<const Attachment> attachments,
                                       std::optional<double> group_tolerance = {});

/// Adds local thermal baths: Γ̌ = J H_eff − (ζ/2) I and Ď = ħζ(n̄+½) times
/// the mode diagonal of (S S ᵀ)⁻¹. Throws StructuralViolation when a resonant
/// mode's noise couples to another mode.
EffectiveModel build_effective_noise(const EffectiveModel& model, const WilliamsonDecomposition& w,
                                     double zeta, double n_th, double hbar = 1.0);

struct EffectivePropagation {
  PropagationResult result;
  /// max |V_vanloan − V_closed| over the samples for the closed form
  /// e^{−ζt} E V̌₀ Eᵀ + ζ⁻¹(1 − e^{−ζt}) Ď.
  double closed_form_discrepancy = 0.0;
  bool diffusion_scalar = false;
};

EffectivePropagation propagate_effective(const EffectiveModel& model, const CovarianceState& v0,
                                         std::span<const double> times);

/// E(t) = exp(J (ε/4)(H_q ⊕ H_q) t) for a single real-coupled mode, from
/// the closed-form entries. Ordering (q_a, q_b, q_m, p_a, p_b, p_m).
Matrix analytic_propagator_6x6(double s_alpha, double s_beta, double epsilon, double t);

/// Transfer function with ň_a = 2 n̄_b F; weight_product = S²_{mα} S²_{mβ}.
double transfer_function_F(double chi, double tau, double weight_product);

/// ň_a = 2 n̄_b F(χ, εt/4) + 4χ⁻² S²_{mα} sin²(χεt/8) n̄.
double occupation_closed_form(double n_b, double n_network, const EffectiveCoefficients& c,
                              double epsilon, double t);

/// Contribution of the initial network occupation alone.
double network_occupation_term(double n_network, const EffectiveCoefficients& c, double epsilon,
                               double t);

RWAReport rwa_validity_report(const SystemSpec& spec, const WilliamsonDecomposition& w,
                              std::span<const int> modes);

/// Modes whose frequency lies within `tolerance` (default 1e-9·frequency)
/// of `frequency`. Refuses empty matches and matches spanning groups.
std::vector<int> resolve_resonant_modes(const WilliamsonDecomposition& w, double frequency,
                                        std::optional<double> tolerance = {});

}  // namespace oscbus
