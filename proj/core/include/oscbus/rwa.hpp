#pragma once

#include <array>
#include <limits>

#include "oscbus/linalg.hpp"

namespace oscbus {

/// Two oscillators with H₀ = ħω₁a₁†a₁ + ħω₂a₂†a₂ and interaction
/// ħ[η a₁†a₂ + η* a₂†a₁ + Σ_jk (ξ_jk a_j a_k + ξ*_jk a_j† a_k†)].
struct TwoOscillatorModel {
  double omega1 = 1.0;
  double omega2 = 1.0;
  Complex eta{0.0, 0.0};
  std::array<std::array<Complex, 2>, 2> xi{};

  void validate() const;
};

struct FockPair {
  int n1 = 0;
  int n2 = 0;
  friend bool operator==(const FockPair&, const FockPair&) = default;
};

enum class TransitionClass { energy_conserving, non_energy_conserving, forbidden };

const char* to_string(TransitionClass c);

struct TransitionReport {
  Complex matrix_element;  ///< ⟨to|H_I|from⟩/ħ
  double delta = 0.0;      ///< (E_from − E_to)/ħ
  double delta_E = 0.0;    ///< ħ·delta
  double amplitude = 0.0;  ///< |matrix_element| / |delta|; +inf on exact resonance
  TransitionClass classification = TransitionClass::forbidden;
};

TransitionReport analyze_transition(const TwoOscillatorModel& model, FockPair from, FockPair to,
                                    double hbar = 1.0);

struct ProbabilityResult {
  double value = 0.0;
  bool breakdown = false;  ///< value exceeds 1: first-order theory no longer applies
};

/// First-order probability |M|²τ² sinc²(δτ/2) = 2Δ²(1 − cos δτ).
ProbabilityResult transition_probability(const TwoOscillatorModel& model, FockPair from, FockPair to,
                                         double tau);

/// Δ of the transition; +inf for a resonant (δ = 0) allowed transition.
double perturbation_ratio(const TwoOscillatorModel& model, FockPair from, FockPair to);

/// Drops every ξ term, keeping the exchange coupling.
TwoOscillatorModel rwa_hamiltonian(const TwoOscillatorModel& model);

/// H/ħ on the Fock states with n₁ + n₂ ≤ max_excitations, ordered by total
/// excitation then n₁ descending; couplings leaving the space are dropped.
CMatrix fock_hamiltonian(const TwoOscillatorModel& model, int max_excitations);

/// a₁†a₁ + a₂†a₂ on the same truncated basis.
Matrix number_operator(int max_excitations);

}  // namespace oscbus
