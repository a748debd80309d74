#include "oscbus/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscbus {

CovarianceState build_initial_cm(const InitialStateSpec& spec, int n_network_modes, ModelKind which,
                                 double hbar) {
  if (spec.n_b < 0.0 || spec.n_network < 0.0) {
    throw InvalidArgument("initial occupations must be >= 0");
  }
  if (n_network_modes < 0) throw InvalidDimension("negative mode count");
  (void)which;  // both layouts share (q_a, q_b, rest…, p_a, p_b, rest…)
  const int total = n_network_modes + 2;
  Vector diag = Vector::Constant(2 * total, 0.5 * hbar * (2.0 * spec.n_network + 1.0));
  for (int x = 0; x < 2; ++x) {
    const double occupation = x == 0 ? 0.0 : spec.n_b;
    diag(x) = diag(x + total) = 0.5 * hbar * (2.0 * occupation + 1.0);
  }
  CovarianceState out;
  out.V = diag.asDiagonal();
  out.mean = Vector::Zero(2 * total);
  out.t = 0.0;
  return out;
}

CovarianceState project_to_modes(const CovarianceState& full, const Matrix& s0,
                                 std::span<const int> modes) {
  const int total = full.n_modes();
  if (s0.rows() != 2 * total || s0.cols() != 2 * total) {
    throw InvalidDimension("symplectic transform does not match the state dimension");
  }
  const int n = total - 2;
  std::vector<int> idx{0, 1};
  for (int m : modes) {
    if (m < 0 || m >= n) throw InvalidArgument("mode " + std::to_string(m + 1) + " out of range");
    idx.push_back(2 + m);
  }
  const int r = static_cast<int>(idx.size());
  for (int k = 0; k < r; ++k) idx.push_back(idx[k] + total);

  const Matrix inv = detail::symplectic_inverse(s0);
  const Matrix vy = inv.transpose() * full.V * inv;
  const Vector my = inv.transpose() * full.mean;
  CovarianceState out;
  out.V.resize(2 * r, 2 * r);
  out.mean.resize(2 * r);
  for (int i = 0; i < 2 * r; ++i) {
    out.mean(i) = my(idx[i]);
    for (int j = 0; j < 2 * r; ++j) out.V(i, j) = vy(idx[i], idx[j]);
  }
  out.V = linalg::symmetrize(out.V);
  out.t = full.t;
  return out;
}

ReducedState reduce_to_oscillator(const CovarianceState& state, int index, std::string label) {
  const int n = state.n_modes();
  if (index < 0 || index >= n) {
    throw InvalidArgument("oscillator index " + std::to_string(index) + " is outside 0.." +
                          std::to_string(n - 1));
  }
  const int idx[2] = {index, index + n};
  ReducedState out;
  out.V2.resize(2, 2);
  out.mean.resize(2);
  for (int r = 0; r < 2; ++r) {
    out.mean(r) = state.mean.size() == 2 * n ? state.mean(idx[r]) : 0.0;
    for (int c = 0; c < 2; ++c) out.V2(r, c) = state.V(idx[r], idx[c]);
  }
  out.label = label.empty() ? std::to_string(index) : std::move(label);
  return out;
}

ReducedState reduce_to_oscillator(const CovarianceState& state, External x) {
  return reduce_to_oscillator(state, layout::q_external(x), to_string(x));
}

double occupation_number(const ReducedState& r, double hbar) {
  const double n = (r.V2(0, 0) + r.V2(1, 1)) / (2.0 * hbar) - 0.5;
  if (n < -1e-9) {
    std::ostringstream os;
    os << "negative occupation " << n << " for oscillator " << r.label;
    throw InvalidState(os.str());
  }
  return n;
}

FidelityResult gaussian_fidelity_detail(const ReducedState& a, const ReducedState& b, double hbar) {
  for (const auto* s : {&a, &b}) {
    if (s->V2.rows() != 2 || s->V2.cols() != 2) throw InvalidDimension("fidelity needs 2x2 states");
    if (s->mean.size() == 2 && s->mean.cwiseAbs().maxCoeff() > 1e-10) {
      throw InvalidState("fidelity formula requires zero-mean states");
    }
    if (std::abs(s->V2(0, 1) - s->V2(1, 0)) > 1e-12 * std::max(1.0, s->V2.cwiseAbs().maxCoeff())) {
      throw InvalidState("reduced covariance is not symmetric");
    }
  }
  const Matrix at = 2.0 * a.V2 / hbar;
  const Matrix bt = 2.0 * b.V2 / hbar;
  const double det_a = at.determinant();
  const double det_b = bt.determinant();
  if (det_a < 1.0 - 1e-9 || det_b < 1.0 - 1e-9 || at.trace() <= 0.0 || bt.trace() <= 0.0) {
    throw InvalidState("reduced covariance violates the uncertainty relation");
  }
  const double big = (at + bt).determinant();
  double small = (det_a - 1.0) * (det_b - 1.0);
  if (small < 0.0 && small > -1e-12) small = 0.0;
  const double raw = 2.0 / (std::sqrt(big + small) - std::sqrt(small));
  FidelityResult out;
  out.value = std::clamp(raw, 0.0, 1.0);
  out.clamp = std::abs(raw - out.value);
  return out;
}

double gaussian_fidelity(const ReducedState& a, const ReducedState& b, double hbar) {
  return gaussian_fidelity_detail(a, b, hbar).value;
}

ReducedState to_lab_frame(const ReducedState& r, double Omega, double t) {
  const double c = std::cos(Omega * t);
  const double s = std::sin(Omega * t);
  Matrix rot(2, 2);
  rot << c, s, -s, c;
  ReducedState out = r;
  out.V2 = rot * r.V2 * rot.transpose();
  if (out.mean.size() == 2) out.mean = rot * r.mean;
  return out;
}

}  // namespace oscbus
