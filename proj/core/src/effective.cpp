#include "oscbus/effective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace oscbus {

namespace {

void check_modes(const WilliamsonDecomposition& w, std::span<const int> modes) {
  if (modes.empty()) throw InvalidArgument("effective model needs at least one resonant mode");
  const int n = w.n_modes();
  std::set<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= n) {
      throw InvalidArgument("mode " + std::to_string(m + 1) + " is outside 1.." + std::to_string(n));
    }
    if (!seen.insert(m).second) {
      throw InvalidArgument("mode " + std::to_string(m + 1) + " listed twice");
    }
  }
}

void check_attachments(const WilliamsonDecomposition& w, std::span<const Attachment> attachments) {
  if (attachments.empty()) throw InvalidArgument("effective model needs at least one attachment");
  for (const auto& att : attachments) {
    if (att.site < 0 || att.site >= w.n_modes()) {
      throw InvalidArgument("attachment site " + std::to_string(att.site + 1) + " is outside 1.." +
                            std::to_string(w.n_modes()));
    }
  }
}

int first_of(std::span<const Attachment> attachments, External x) {
  for (size_t j = 0; j < attachments.size(); ++j) {
    if (attachments[j].external == x) return static_cast<int>(j);
  }
  return -1;
}

bool is_scalar_matrix(const Matrix& d) {
  if (d.rows() == 0) return true;
  const double c = d(0, 0);
  const Matrix diff = d - c * Matrix::Identity(d.rows(), d.cols());
  return linalg::max_abs(diff) <= 1e-12 * std::max(1.0, std::abs(c));
}

}  // namespace

EffectiveCoefficients effective_coefficients(const WilliamsonDecomposition& w,
                                             std::span<const int> modes,
                                             std::span<const Attachment> attachments) {
  check_modes(w, modes);
  check_attachments(w, attachments);
  const int n = w.n_modes();

  EffectiveCoefficients out;
  out.modes.assign(modes.begin(), modes.end());
  out.attachments.assign(attachments.begin(), attachments.end());
  for (const auto& att : attachments) {
    std::vector<Complex> row;
    row.reserve(modes.size());
    for (int m : modes) row.emplace_back(w.S(m, att.site), -w.S(m + n, att.site));
    out.D.push_back(std::move(row));
  }

  const int ia = first_of(attachments, External::a);
  const int ib = first_of(attachments, External::b);
  const int m = modes.front();
  for (size_t j = 0; j < attachments.size(); ++j) {
    const double weight = std::norm(out.D[j][0]);
    if (static_cast<int>(j) == ia || static_cast<int>(j) == ib) {
      out.C_ab += weight;
    } else {
      out.E_extra.push_back(weight);
    }
  }
  if (ia >= 0) out.s_alpha = w.S(m, attachments[ia].site);
  if (ib >= 0) out.s_beta = w.S(m, attachments[ib].site);
  out.chi = out.s_alpha * out.s_alpha + out.s_beta * out.s_beta + 1.0;
  return out;
}

EffectiveModel build_effective_hessian(const WilliamsonDecomposition& w,
                                       std::span<const int> modes,
                                       std::span<const Attachment> attachments,
                                       std::optional<double> group_tolerance) {
  check_modes(w, modes);
  check_attachments(w, attachments);
  const ModeGrouping grouping = group_degenerate_modes(w.spectrum, group_tolerance);
  const int group = grouping.group_of(modes.front());
  for (int m : modes) {
    if (grouping.group_of(m) != group) {
      std::ostringstream os;
      os << "resonant modes " << modes.front() + 1 << " and " << m + 1
         << " belong to different degeneracy groups";
      throw InvalidArgument(os.str());
    }
  }

  EffectiveModel model;
  model.modes.assign(modes.begin(), modes.end());
  model.coefficients = effective_coefficients(w, modes, attachments);

  const int r = model.n_modes();
  CMatrix h = CMatrix::Zero(r, r);
  for (size_t j = 0; j < attachments.size(); ++j) {
    CVector c = CVector::Zero(r);
    c(layout::q_external(attachments[j].external)) = -1.0;
    for (size_t k = 0; k < modes.size(); ++k) c(2 + static_cast<int>(k)) = model.coefficients.D[j][k];
    h += (attachments[j].epsilon / 4.0) * c.conjugate() * c.transpose();
  }
  const Matrix hr = h.real();
  const Matrix hi = h.imag();
  Matrix heff(2 * r, 2 * r);
  heff << hr, -hi, hi, hr;
  model.hessian = QuadraticForm(linalg::symmetrize(heff));
  model.drift = symplectic_form(r) * model.hessian.matrix();
  model.diffusion = Matrix::Zero(2 * r, 2 * r);
  return model;
}

EffectiveModel build_effective_noise(const EffectiveModel& model, const WilliamsonDecomposition& w,
                                     double zeta, double n_th, double hbar) {
  if (zeta < 0.0) throw InvalidArgument("bath rate zeta must be >= 0");
  if (n_th < 0.0) throw InvalidArgument("bath occupation n_th must be >= 0");
  if (hbar <= 0.0) throw InvalidArgument("hbar must be > 0");
  const int n = w.n_modes();
  const Matrix p = w.S * w.S.transpose();
  const double tol = 1e-10 * std::max(1.0, linalg::max_abs(p));

  const int r = model.n_modes();
  Vector weights = Vector::Ones(2 * r);
  for (size_t k = 0; k < model.modes.size(); ++k) {
    const int m = model.modes[k];
    for (int row : {m, m + n}) {
      for (int col = 0; col < 2 * n; ++col) {
        if (col == row || std::abs(p(row, col)) <= tol) continue;
        std::ostringstream os;
        os << "bath seen by mode " << m + 1 << " is not local (couples to mode " << col % n + 1
           << "); the network does not satisfy the locality conditions, use the exact model";
        throw StructuralViolation(os.str(), m, col % n);
      }
    }
    weights(2 + static_cast<int>(k)) = 1.0 / p(m, m);
    weights(r + 2 + static_cast<int>(k)) = 1.0 / p(m + n, m + n);
  }

  EffectiveModel out = model;
  out.zeta = zeta;
  out.drift = symplectic_form(r) * model.hessian.matrix() -
              (zeta / 2.0) * Matrix::Identity(2 * r, 2 * r);
  out.diffusion = (hbar * zeta * (n_th + 0.5) * weights).asDiagonal();
  return out;
}

EffectivePropagation propagate_effective(const EffectiveModel& model, const CovarianceState& v0,
                                         std::span<const double> times) {
  if (v0.V.rows() != model.dimension()) {
    throw InvalidDimension("initial covariance does not match the effective model dimension");
  }
  EffectivePropagation out;
  out.result = propagate_cm(model.drift, model.diffusion, v0, times);
  out.diffusion_scalar = is_scalar_matrix(model.diffusion);

  const Matrix generator = symplectic_form(model.n_modes()) * model.hessian.matrix();
  for (const auto& state : out.result.states) {
    const double dt = state.t - v0.t;
    const Matrix e = linalg::expm(generator * dt);
    const double decay = std::exp(-model.zeta * dt);
    const double fill = model.zeta > 0.0 ? -std::expm1(-model.zeta * dt) / model.zeta : dt;
    const Matrix closed = decay * e * v0.V * e.transpose() + fill * model.diffusion;
    out.closed_form_discrepancy =
        std::max(out.closed_form_discrepancy, linalg::max_abs(Matrix(state.V - closed)));
  }
  if (out.diffusion_scalar && out.closed_form_discrepancy > 1e-9) {
    std::ostringstream os;
    os << "closed-form and propagated effective covariances differ by "
       << out.closed_form_discrepancy;
    out.result.warnings.push_back(os.str());
  }
  return out;
}

Matrix analytic_propagator_6x6(double s_alpha, double s_beta, double epsilon, double t) {
  const double r = s_alpha * s_alpha + s_beta * s_beta;
  const double chi = 1.0 + r;
  const double tau = EffectiveCoefficients::tau(epsilon, t);

  // The 1/(χ−1) factors always multiply S² products, so they are carried as
  // bounded weights; at χ = 1 any split with w_α + w_β = 1 is exact.
  double wa = 0.5, wb = 0.5, wab = 0.0;
  if (r > 0.0) {
    wa = s_alpha * s_alpha / r;
    wb = s_beta * s_beta / r;
    wab = s_alpha * s_beta / r;
  }
  const double ct = std::cos(tau), st = std::sin(tau);
  const double cx = std::cos(chi * tau), sx = std::sin(chi * tau);
  const double half = std::sin(chi * tau / 2.0);

  Matrix c(3, 3), s(3, 3);
  c(0, 0) = wb * ct + wa * (r + cx) / chi;
  c(1, 1) = wa * ct + wb * (r + cx) / chi;
  c(0, 1) = c(1, 0) = wab * (r - chi * ct + cx) / chi;
  c(0, 2) = c(2, 0) = 2.0 * s_alpha / chi * half * half;
  c(1, 2) = c(2, 1) = 2.0 * s_beta / chi * half * half;
  c(2, 2) = 1.0 / chi + r / chi * cx;

  s(0, 0) = wa * sx / chi + wb * st;
  s(1, 1) = wb * sx / chi + wa * st;
  s(0, 1) = s(1, 0) = wab * (sx - chi * st) / chi;
  s(0, 2) = s(2, 0) = -s_alpha / chi * sx;
  s(1, 2) = s(2, 1) = -s_beta / chi * sx;
  s(2, 2) = r / chi * sx;

  Matrix e(6, 6);
  e << c, s, -s, c;
  return e;
}

double transfer_function_F(double chi, double tau, double weight_product) {
  if (!(chi > 1.0)) {
    throw DomainError("transfer function needs chi > 1 (both externals coupled), got chi = " +
                      std::to_string(chi));
  }
  const double d = chi - 1.0;
  const double bracket = (1.0 / chi - std::cos(d * tau)) / d + std::cos(chi * tau) / chi +
                         (1.0 - std::cos(tau));
  return weight_product / (chi * d) * bracket;
}

double network_occupation_term(double n_network, const EffectiveCoefficients& c, double epsilon,
                               double t) {
  const double s = std::sin(c.chi * epsilon * t / 8.0);
  return 4.0 / (c.chi * c.chi) * c.s_alpha * c.s_alpha * s * s * n_network;
}

double occupation_closed_form(double n_b, double n_network, const EffectiveCoefficients& c,
                              double epsilon, double t) {
  const double weight_product = c.s_alpha * c.s_alpha * c.s_beta * c.s_beta;
  const double tau = EffectiveCoefficients::tau(epsilon, t);
  return 2.0 * n_b * transfer_function_F(c.chi, tau, weight_product) +
         network_occupation_term(n_network, c, epsilon, t);
}

RWAReport rwa_validity_report(const SystemSpec& spec, const WilliamsonDecomposition& w,
                              std::span<const int> modes) {
  RWAReport report;
  const double eps = spec.max_epsilon();
  report.eps_over_Omega = eps / spec.Omega;
  report.min_offresonant_detuning = std::numeric_limits<double>::infinity();
  for (int k = 0; k < w.n_modes(); ++k) {
    if (std::find(modes.begin(), modes.end(), k) != modes.end()) continue;
    report.min_offresonant_detuning =
        std::min(report.min_offresonant_detuning, std::abs(w.spectrum(k) - spec.Omega));
  }
  if (!modes.empty()) {
    const ModeGrouping grouping = group_degenerate_modes(w.spectrum);
    const int g = grouping.group_of(modes.front());
    if (g >= 0) report.degenerate_group = grouping.groups[g];
  }

  std::ostringstream os;
  if (report.eps_over_Omega > 0.1) {
    os << "coupling is not weak: epsilon/Omega = " << report.eps_over_Omega << " > 0.1";
    report.warnings.push_back(os.str());
    os.str("");
  }
  if (report.min_offresonant_detuning < 10.0 * eps) {
    os << "a non-resonant mode lies within " << report.min_offresonant_detuning
       << " of Omega (< 10 epsilon)";
    report.warnings.push_back(os.str());
    os.str("");
  }
  for (int m : modes) {
    if (m >= 0 && m < w.n_modes() && std::abs(w.spectrum(m) - spec.Omega) > 1e-9 * spec.Omega) {
      os << "Omega is detuned from resonant mode " << m + 1 << " by "
         << w.spectrum(m) - spec.Omega;
      report.warnings.push_back(os.str());
      os.str("");
    }
  }
  return report;
}

std::vector<int> resolve_resonant_modes(const WilliamsonDecomposition& w, double frequency,
                                        std::optional<double> tolerance) {
  if (!(frequency > 0.0)) throw InvalidArgument("resonant frequency must be > 0");
  const double tol = tolerance.value_or(1e-9 * frequency);
  if (tol < 0.0) throw InvalidArgument("resonance tolerance must be >= 0");
  std::vector<int> out;
  for (int k = 0; k < w.n_modes(); ++k) {
    if (std::abs(w.spectrum(k) - frequency) <= tol) out.push_back(k);
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "no normal mode within " << tol << " of frequency " << frequency;
    throw InvalidArgument(os.str());
  }
  const ModeGrouping grouping = group_degenerate_modes(w.spectrum);
  for (int k : out) {
    if (grouping.group_of(k) != grouping.group_of(out.front())) {
      std::ostringstream os;
      os << "frequency " << frequency << " matches modes " << out.front() + 1 << " and " << k + 1
         << " from different degeneracy groups; choose the mode explicitly";
      throw InvalidArgument(os.str());
    }
  }
  return out;
}

}  // namespace oscbus
