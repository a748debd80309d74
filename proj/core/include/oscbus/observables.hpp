#pragma once

#include <span>
#include <string>

#include "oscbus/gaussian.hpp"

namespace oscbus {

struct InitialStateSpec {
  double n_b = 0.0;
  double n_network = 0.0;
};

enum class ModelKind { full, effective };

/// Oscillator a in vacuum, b thermal with n̄_b, network (or resonant modes)
/// thermal with n̄_network. `n_network_modes` is N for the full model and
/// the number of resonant modes for the effective one.
CovarianceState build_initial_cm(const InitialStateSpec& spec, int n_network_modes, ModelKind which,
                                 double hbar = 1.0);

/// Exact normal-mode projection of a full-system state onto the effective
/// ordering (q_a, q_b, modes…, p_a, p_b, modes…): V_Y = S₀⁻ᵀ V S₀⁻¹
/// restricted to the retained coordinates, with S₀ the global symplectic.
CovarianceState project_to_modes(const CovarianceState& full, const Matrix& s0,
                                 std::span<const int> modes);

struct ReducedState {
  Matrix V2;
  Vector mean;
  std::string label;
};

/// 2×2 block of oscillator `index` (0-based position in the q block).
ReducedState reduce_to_oscillator(const CovarianceState& state, int index, std::string label = {});
ReducedState reduce_to_oscillator(const CovarianceState& state, External x);

/// n̄ = (V_qq + V_pp)/(2ħ) − ½.
double occupation_number(const ReducedState& r, double hbar = 1.0);

struct FidelityResult {
  double value = 0.0;
  double clamp = 0.0;  ///< |raw − value|, zero unless the raw value left [0, 1]
};

/// Fidelity of two zero-mean single-mode Gaussian states.
FidelityResult gaussian_fidelity_detail(const ReducedState& a, const ReducedState& b,
                                        double hbar = 1.0);
double gaussian_fidelity(const ReducedState& a, const ReducedState& b, double hbar = 1.0);

/// Maps an interaction-picture single-mode state rotating at Ω back to the
/// laboratory frame: V → R V Rᵀ with R = exp(J₂ Ω t).
ReducedState to_lab_frame(const ReducedState& r, double Omega, double t);

}  // namespace oscbus
