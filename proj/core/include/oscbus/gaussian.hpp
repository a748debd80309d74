#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscbus/networks.hpp"

namespace oscbus {

/// Second moments, first moments and time of a Gaussian state.
struct CovarianceState {
  Matrix V;
  Vector mean;
  double t = 0.0;

  int n_modes() const { return static_cast<int>(V.rows() / 2); }
  /// Throws InvalidState when V is asymmetric or violates V + (iħ/2)J ≥ 0.
  void validate(double hbar) const;
};

struct ThermalBath {
  double zeta = 0.0;
  double n_th = 0.0;
};

/// Linear Lindblad noise: Υ = Σ_k λ_k λ_k†. The λ_k carry no ħ; it enters
/// through the diffusion D = ħ Re Υ.
struct NoiseModel {
  std::vector<CVector> lambdas;
  CMatrix upsilon;
  std::optional<ThermalBath> bath;
  double hbar = 1.0;

  static NoiseModel from_lambdas(std::vector<CVector> lambdas, double hbar = 1.0);
  int dimension() const { return static_cast<int>(upsilon.rows()); }
};

struct DriftDiffusion {
  Matrix drift;
  Matrix diffusion;
};

/// Independent local thermal baths on every oscillator of the system.
NoiseModel thermal_bath_noise(const SystemSpec& spec, double zeta, double n_th);
NoiseModel thermal_bath_noise(int n_oscillators, double zeta, double n_th, double hbar = 1.0);

/// Γ = JH − Im(Υ)J and D = ħ Re(Υ).
DriftDiffusion drift_and_diffusion(const QuadraticForm& h, const NoiseModel& noise);

struct PropagationResult {
  std::vector<double> times;
  std::vector<CovarianceState> states;
  std::vector<std::string> warnings;
};

/// Evolves V under dV/dt = ΓV + VΓᵀ + D, sampling at `times` (sorted,
/// times[0] ≥ v0.t). Each step uses the augmented exponential
/// exp([[Γ, D], [0, −Γᵀ]]Δ), cached per distinct step length.
PropagationResult propagate_cm(const Matrix& drift, const Matrix& diffusion,
                               const CovarianceState& v0, std::span<const double> times);

/// Solution of ΓV + VΓᵀ + D = 0 for Hurwitz Γ.
CovarianceState steady_state(const Matrix& drift, const Matrix& diffusion);

/// Noise seen by the normal-mode coordinates Y with X = S₀ᵀY.
NoiseModel transform_noise_to_modes(const NoiseModel& noise, const Matrix& s0);

enum class BathKind { thermal_local, squeezed_local, nonlocal };

const char* to_string(BathKind kind);

struct ModeBath {
  BathKind kind = BathKind::nonlocal;
  double q_weight = 0.0;  ///< Re Υ'_qq / (n̄+½)ζ when thermal, raw otherwise
  double p_weight = 0.0;
  int partner = -1;       ///< a mode with a non-vanishing cross block, if any
};

/// Per-mode locality of the transformed noise (cross-block tolerance 1e-10).
std::vector<ModeBath> classify_mode_baths(const NoiseModel& noise, const Matrix& s0);

namespace detail {
/// Inverse of a symplectic matrix, −J Sᵀ J.
Matrix symplectic_inverse(const Matrix& s);
}  // namespace detail

}  // namespace oscbus
