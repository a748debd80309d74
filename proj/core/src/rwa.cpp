#include "oscbus/rwa.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace oscbus {

namespace {

// One ladder operator: which oscillator (0/1) and whether it raises.
struct Ladder {
  int mode;
  bool raise;
};

struct Term {
  Complex coefficient;
  Ladder left;   // applied second
  Ladder right;  // applied first
};

std::vector<Term> interaction_terms(const TwoOscillatorModel& m) {
  std::vector<Term> terms;
  terms.push_back({m.eta, {0, true}, {1, false}});
  terms.push_back({std::conj(m.eta), {1, true}, {0, false}});
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      terms.push_back({m.xi[j][k], {j, false}, {k, false}});
      terms.push_back({std::conj(m.xi[j][k]), {j, true}, {k, true}});
    }
  }
  return terms;
}

// Applies a ladder operator to |n₁, n₂⟩ in place; returns the amplitude
// (0 when the state is annihilated).
double apply(const Ladder& op, std::array<int, 2>& n) {
  int& occ = n[op.mode];
  if (op.raise) {
    ++occ;
    return std::sqrt(static_cast<double>(occ));
  }
  if (occ == 0) return 0.0;
  const double amp = std::sqrt(static_cast<double>(occ));
  --occ;
  return amp;
}

Complex matrix_element(const std::vector<Term>& terms, FockPair from, FockPair to) {
  Complex total{0.0, 0.0};
  for (const auto& term : terms) {
    if (term.coefficient == Complex{0.0, 0.0}) continue;
    std::array<int, 2> n{from.n1, from.n2};
    double amp = apply(term.right, n);
    if (amp == 0.0) continue;
    amp *= apply(term.left, n);
    if (amp != 0.0 && n[0] == to.n1 && n[1] == to.n2) total += term.coefficient * amp;
  }
  return total;
}

void check_pair(FockPair p) {
  if (p.n1 < 0 || p.n2 < 0) throw InvalidArgument("Fock occupations must be >= 0");
}

std::vector<FockPair> truncated_basis(int max_excitations) {
  if (max_excitations < 0) throw InvalidArgument("max_excitations must be >= 0");
  std::vector<FockPair> basis;
  for (int total = 0; total <= max_excitations; ++total) {
    for (int n1 = total; n1 >= 0; --n1) basis.push_back({n1, total - n1});
  }
  return basis;
}

}  // namespace

void TwoOscillatorModel::validate() const {
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) {
    throw InvalidArgument("oscillator frequencies must be > 0");
  }
}

const char* to_string(TransitionClass c) {
  switch (c) {
    case TransitionClass::energy_conserving: return "energy_conserving";
    case TransitionClass::non_energy_conserving: return "non_energy_conserving";
    case TransitionClass::forbidden: return "forbidden";
  }
  return "unknown";
}

TransitionReport analyze_transition(const TwoOscillatorModel& model, FockPair from, FockPair to,
                                    double hbar) {
  model.validate();
  check_pair(from);
  check_pair(to);
  TransitionReport out;
  out.matrix_element = matrix_element(interaction_terms(model), from, to);
  out.delta = model.omega1 * (from.n1 - to.n1) + model.omega2 * (from.n2 - to.n2);
  out.delta_E = hbar * out.delta;

  const double magnitude = std::abs(out.matrix_element);
  if (magnitude == 0.0) {
    out.classification = TransitionClass::forbidden;
    out.amplitude = 0.0;
    return out;
  }
  const int d1 = to.n1 - from.n1;
  const int d2 = to.n2 - from.n2;
  out.classification = (std::abs(d1) == 1 && d1 == -d2) ? TransitionClass::energy_conserving
                                                        : TransitionClass::non_energy_conserving;
  out.amplitude = out.delta == 0.0 ? std::numeric_limits<double>::infinity()
                                   : magnitude / std::abs(out.delta);
  return out;
}

ProbabilityResult transition_probability(const TwoOscillatorModel& model, FockPair from, FockPair to,
                                          double tau) {
  const TransitionReport report = analyze_transition(model, from, to);
  ProbabilityResult out;
  if (report.classification == TransitionClass::forbidden) return out;
  const double m2 = std::norm(report.matrix_element);
  const double x = report.delta * tau / 2.0;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  out.value = m2 * tau * tau * sinc * sinc;
  out.breakdown = out.value > 1.0;
  return out;
}

double perturbation_ratio(const TwoOscillatorModel& model, FockPair from, FockPair to) {
  return analyze_transition(model, from, to).amplitude;
}

TwoOscillatorModel rwa_hamiltonian(const TwoOscillatorModel& model) {
  TwoOscillatorModel out = model;
  out.xi = {};
  return out;
}

CMatrix fock_hamiltonian(const TwoOscillatorModel& model, int max_excitations) {
  model.validate();
  const auto basis = truncated_basis(max_excitations);
  const auto terms = interaction_terms(model);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    h(c, c) += model.omega1 * basis[c].n1 + model.omega2 * basis[c].n2;
    for (Eigen::Index r = 0; r < dim; ++r) h(r, c) += matrix_element(terms, basis[c], basis[r]);
  }
  return h;
}

Matrix number_operator(int max_excitations) {
  const auto basis = truncated_basis(max_excitations);
  Vector d(static_cast<Eigen::Index>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) d(static_cast<Eigen::Index>(i)) = basis[i].n1 + basis[i].n2;
  return d.asDiagonal();
}

}  // namespace oscbus
