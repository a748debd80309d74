#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <oscbus/rwa.hpp>

namespace oscbus {
namespace {

TwoOscillatorModel detuned(double coupling) {
  TwoOscillatorModel m;
  m.omega1 = 1.0;
  m.omega2 = 1.1;
  m.eta = Complex(coupling, 0.0);
  m.xi[0][1] = m.xi[1][0] = Complex(coupling / 2.0, 0.0);
  return m;
}

double envelope_max(const TwoOscillatorModel& m, FockPair from, FockPair to) {
  const TransitionReport r = analyze_transition(m, from, to);
  double best = 0.0;
  const double period = 2.0 * std::acos(-1.0) / std::abs(r.delta);
  for (int i = 0; i <= 4000; ++i) {
    best = std::max(best, transition_probability(m, from, to, period * i / 4000.0).value);
  }
  return best;
}

TEST(Transitions, ExchangeConservesExcitations) {
  const auto m = detuned(0.01);
  const auto r = analyze_transition(m, {1, 0}, {0, 1});
  EXPECT_EQ(r.classification, TransitionClass::energy_conserving);
  EXPECT_NEAR(std::abs(r.matrix_element), 0.01, 1e-15);
  EXPECT_NEAR(r.delta, -0.1, 1e-14);
  EXPECT_NEAR(r.amplitude, 0.1, 1e-12);
}

TEST(Transitions, PairCreationIsNonConserving) {
  const auto m = detuned(0.01);
  const auto r = analyze_transition(m, {0, 0}, {1, 1});
  EXPECT_EQ(r.classification, TransitionClass::non_energy_conserving);
  EXPECT_NEAR(std::abs(r.matrix_element), 0.01, 1e-15);
  EXPECT_NEAR(r.delta, -2.1, 1e-14);
  EXPECT_EQ(r.delta_E, r.delta);
  EXPECT_NEAR(analyze_transition(m, {0, 0}, {1, 1}, 2.0).delta_E, -4.2, 1e-13);
}

TEST(Transitions, UnreachableStatesAreForbidden) {
  const auto m = detuned(0.01);
  EXPECT_EQ(analyze_transition(m, {0, 0}, {3, 0}).classification, TransitionClass::forbidden);
  EXPECT_EQ(analyze_transition(m, {2, 0}, {0, 0}).classification, TransitionClass::forbidden);
  EXPECT_EQ(transition_probability(m, {0, 0}, {3, 0}, 5.0).value, 0.0);
  EXPECT_THROW(analyze_transition(m, {-1, 0}, {0, 0}), InvalidArgument);
}

TEST(Transitions, BosonicEnhancement) {
  const auto m = detuned(0.01);
  // ⟨n₁−1, n₂+1| a₁ a₂† |n₁, n₂⟩ = √(n₁ (n₂+1)).
  const auto r = analyze_transition(m, {3, 2}, {2, 3});
  EXPECT_NEAR(std::abs(r.matrix_element), 0.01 * std::sqrt(9.0), 1e-14);
}

TEST(Transitions, ResonantExchangeHasInfiniteRatio) {
  TwoOscillatorModel m;
  m.eta = Complex(0.0, 0.02);
  EXPECT_EQ(perturbation_ratio(m, {1, 0}, {0, 1}), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(transition_probability(m, {1, 0}, {0, 1}, 10.0).value, 0.04, 1e-14);
}

TEST(Transitions, EnvelopeRatioFollowsDetunings) {
  const auto m = detuned(0.001);
  const double conserving = envelope_max(m, {1, 0}, {0, 1});
  const double creating = envelope_max(m, {0, 0}, {1, 1});
  const double expected = std::pow((1.0 + 1.1) / (1.0 - 1.1), 2);
  EXPECT_NEAR(conserving / creating / expected, 1.0, 1e-6);
  EXPECT_NEAR(expected, 441.0, 1e-9);
}

TEST(Transitions, BreakdownFlaggedForLargeProbabilities) {
  const auto m = detuned(0.2);
  EXPECT_FALSE(transition_probability(m, {1, 0}, {0, 1}, 1.0).breakdown);
  EXPECT_TRUE(transition_probability(m, {1, 0}, {0, 1}, 20.0).breakdown);
}

TEST(FockHamiltonian, HermitianWithExpectedSize) {
  const auto m = detuned(0.05);
  const CMatrix h = fock_hamiltonian(m, 4);
  EXPECT_EQ(h.rows(), 15);
  EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(h(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(h(2, 2).real(), 1.1, 1e-15);
}

TEST(FockHamiltonian, RotatingWaveVersionConservesExcitations) {
  const auto m = detuned(0.05);
  const CMatrix n = number_operator(5).cast<Complex>();
  const CMatrix full = fock_hamiltonian(m, 5);
  const CMatrix rwa = fock_hamiltonian(rwa_hamiltonian(m), 5);
  EXPECT_LT((rwa * n - n * rwa).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_GT((full * n - n * full).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(rwa_hamiltonian(m).eta, m.eta);
}

TEST(FockHamiltonian, RejectsInvalidModels) {
  TwoOscillatorModel m;
  m.omega1 = 0.0;
  EXPECT_THROW(fock_hamiltonian(m, 2), InvalidArgument);
  EXPECT_THROW(fock_hamiltonian(detuned(0.1), -1), InvalidArgument);
}

TEST(Transitions, ClosedFormMatchesQuadrature) {
  // First-order amplitude ∫₀^τ M e^{iδt} dt by composite Simpson.
  const auto m = detuned(0.003);
  for (auto [from, to] : {std::pair{FockPair{1, 0}, FockPair{0, 1}},
                          std::pair{FockPair{0, 0}, FockPair{1, 1}},
                          std::pair{FockPair{2, 1}, FockPair{1, 2}}}) {
    const auto r = analyze_transition(m, from, to);
    for (double tau : {0.7, 5.0, 31.0}) {
      const int steps = 20000;
      const double h = tau / steps;
      Complex integral{0.0, 0.0};
      for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        integral += w * std::exp(Complex(0.0, r.delta * i * h));
      }
      integral *= h / 3.0;
      const double quadrature = std::norm(r.matrix_element * integral);
      EXPECT_NEAR(transition_probability(m, from, to, tau).value, quadrature, 1e-10);
    }
  }
}

}  // namespace
}  // namespace oscbus
