#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscbus::runner {

namespace {

constexpr double kClosedFormCheck = 1e-9;

std::vector<int> zero_based(const std::vector<int>& modes) {
  std::vector<int> out;
  for (int m : modes) out.push_back(m - 1);
  return out;
}

std::vector<int> resonant_modes(const ExperimentConfig& c, const WilliamsonDecomposition& w,
                                const ModeGrouping& grouping) {
  try {
    if (c.resonant_mode) return grouping.groups[grouping.group_of(*c.resonant_mode - 1)];
    if (c.resonant_frequency) {
      return resolve_resonant_modes(w, *c.resonant_frequency, c.resonance_tolerance);
    }
    return resolve_resonant_modes(w, *c.Omega, c.resonance_tolerance);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("run.resonant_frequency: ") + e.what());
  }
}

struct EffectiveRun {
  EffectiveModel model;
  EffectivePropagation propagation;
};

EffectiveRun run_effective(const ExperimentConfig& c, const SystemSpec& spec,
                           const WilliamsonDecomposition& w, const std::vector<int>& modes,
                           const CovarianceState& full_initial, const Matrix& s0,
                           std::span<const double> times) {
  EffectiveRun out;
  out.model = build_effective_hessian(w, modes, spec.attachments);
  if (c.has_baths) {
    try {
      out.model = build_effective_noise(out.model, w, c.zeta, c.n_th, c.hbar);
    } catch (const StructuralViolation& e) {
      std::ostringstream os;
      os << e.what() << " (drop [baths] or request exact outputs only)";
      throw StructuralViolation(os.str(), e.mode_i(), e.mode_j());
    }
  }
  const CovarianceState v0 =
      c.effective_initial == "projected"
          ? project_to_modes(full_initial, s0, modes)
          : build_initial_cm({c.n_b, c.n_network}, static_cast<int>(modes.size()),
                             ModelKind::effective, c.hbar);
  out.propagation = propagate_effective(out.model, v0, times);
  return out;
}

std::vector<double> occupations(const PropagationResult& r, External x, double hbar) {
  std::vector<double> out;
  out.reserve(r.states.size());
  for (const auto& s : r.states) out.push_back(occupation_number(reduce_to_oscillator(s, x), hbar));
  return out;
}

void append(std::vector<std::string>& into, const std::vector<std::string>& items,
            const std::string& prefix) {
  for (const auto& w : items) into.push_back(prefix + w);
}

}  // namespace

void Series::add(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != columns.front().size()) {
    throw InvalidDimension("column " + name + " has a different length");
  }
  names.push_back(std::move(name));
  columns.push_back(std::move(values));
}

bool Series::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& Series::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidArgument("no column named " + name);
  return columns[static_cast<size_t>(it - names.begin())];
}

const std::vector<std::string>& column_order() {
  static const std::vector<std::string> order = {
      "t_omega", "n_exact_a",  "n_exact_b",        "n_eff_a",   "n_naive_a",
      "tau",     "transfer_F", "n_closed_a", "n_closed_network", "one_minus_fidelity"};
  return order;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  ExperimentResult res;
  res.config = c;

  SystemSpec spec = c.system_spec();
  const WilliamsonDecomposition w = network_williamson(spec.network);
  const ModeGrouping grouping = group_degenerate_modes(w.spectrum);
  res.spectrum = w.spectrum;
  res.tolerances["degenerate_grouping"] = grouping.tolerance;
  res.tolerances["closed_form_check"] = kClosedFormCheck;
  res.tolerances["occupation_floor"] = -1e-9;
  res.tolerances["conditioning_limit"] = 1e4;

  if (c.resonant_mode || c.resonant_frequency || c.Omega) {
    res.resonant_modes = resonant_modes(c, w, grouping);
  }
  res.Omega = c.Omega ? *c.Omega : w.spectrum(res.resonant_modes.front());
  spec.Omega = res.Omega;
  spec.validate();
  res.contrast_modes = zero_based(c.contrast_modes);

  const bool want_exact = c.wants("occupation_exact");
  const bool want_eff = c.wants("occupation_effective");
  const bool want_fid = c.wants("fidelity");
  const bool want_closed = c.wants("occupation_closed_form");
  const bool need_exact = want_exact || want_fid || c.wants("cm_dump");
  const bool need_eff = want_eff || want_fid || c.wants("cm_dump") || c.wants("rwa_report");

  const int samples = c.samples;
  std::vector<double> t_omega(samples);
  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i) {
    t_omega[i] = c.t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    times[i] = t_omega[i] / c.omega;
  }

  const int n = spec.n_network();
  const Matrix s0 = embed_network_symplectic(w.S);
  const CovarianceState full_initial =
      build_initial_cm({c.n_b, c.n_network}, n, ModelKind::full, c.hbar);
  const double zeta = c.has_baths ? c.zeta : 0.0;
  const double n_th = c.has_baths ? c.n_th : 0.0;

  if (!res.resonant_modes.empty()) {
    RWAReport report = rwa_validity_report(spec, w, res.resonant_modes);
    append(res.warnings, report.warnings, "rwa: ");
    res.rwa = std::move(report);
  }

  std::optional<PropagationResult> exact;
  std::optional<DriftDiffusion> exact_dd;
  if (need_exact) {
    const QuadraticForm h = assemble_system_hessian(spec);
    exact_dd = drift_and_diffusion(h, thermal_bath_noise(spec, zeta, n_th));
    exact = propagate_cm(exact_dd->drift, exact_dd->diffusion, full_initial, times);
    append(res.warnings, exact->warnings, "exact: ");
    res.final_exact = exact->states.back();
  }

  std::optional<EffectiveRun> eff;
  if (need_eff) {
    eff = run_effective(c, spec, w, res.resonant_modes, full_initial, s0, times);
    append(res.warnings, eff->propagation.result.warnings, "effective: ");
    res.final_effective = eff->propagation.result.states.back();
    res.closed_form_discrepancy = eff->propagation.closed_form_discrepancy;
    res.diffusion_scalar = eff->propagation.diffusion_scalar;
    if (!res.diffusion_scalar) {
      std::ostringstream os;
      os << "effective: diffusion is not proportional to the identity; closed-form discrepancy "
         << eff->propagation.closed_form_discrepancy << " is reported, not checked";
      res.warnings.push_back(os.str());
    }
  }

  res.series.add("t_omega", t_omega);
  if (want_exact) {
    res.series.add("n_exact_a", occupations(*exact, External::a, c.hbar));
    res.series.add("n_exact_b", occupations(*exact, External::b, c.hbar));
  }
  if (want_eff) {
    res.series.add("n_eff_a", occupations(eff->propagation.result, External::a, c.hbar));
    if (!res.contrast_modes.empty()) {
      const EffectiveRun naive =
          run_effective(c, spec, w, res.contrast_modes, full_initial, s0, times);
      append(res.warnings, naive.propagation.result.warnings, "contrast: ");
      res.series.add("n_naive_a", occupations(naive.propagation.result, External::a, c.hbar));
    }
  }

  if (want_closed) {
    std::string reason;
    if (res.resonant_modes.size() != 1) reason = "the resonance is degenerate";
    else if (c.has_baths) reason = "baths are present";
    else if (c.alpha.size() != 1 || c.beta.size() != 1) reason = "more than two attachments";
    else if (spec.attachments[0].epsilon != spec.attachments[1].epsilon) {
      reason = "the two couplings differ";
    }
    if (!reason.empty()) {
      res.warnings.push_back("closed form skipped: " + reason);
    } else {
      const EffectiveModel model = build_effective_hessian(w, res.resonant_modes, spec.attachments);
      const EffectiveCoefficients& k = model.coefficients;
      const double eps = spec.attachments[0].epsilon;
      const double weight = k.s_alpha * k.s_alpha * k.s_beta * k.s_beta;
      std::vector<double> tau(samples), f(samples), total(samples), network(samples);
      for (int i = 0; i < samples; ++i) {
        tau[i] = EffectiveCoefficients::tau(eps, times[i]);
        f[i] = transfer_function_F(k.chi, tau[i], weight);
        total[i] = occupation_closed_form(c.n_b, c.n_network, k, eps, times[i]);
        network[i] = network_occupation_term(c.n_network, k, eps, times[i]);
      }
      res.series.add("tau", tau);
      res.series.add("transfer_F", f);
      res.series.add("n_closed_a", total);
      res.series.add("n_closed_network", network);
    }
  }

  if (want_fid) {
    std::vector<double> infidelity(samples);
    int clamped = 0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const ReducedState a = reduce_to_oscillator(exact->states[i], External::a);
      const ReducedState b =
          to_lab_frame(reduce_to_oscillator(eff->propagation.result.states[i], External::a),
                       res.Omega, times[i]);
      const FidelityResult f = gaussian_fidelity_detail(a, b, c.hbar);
      infidelity[i] = 1.0 - f.value;
      if (f.clamp > 0.0) {
        ++clamped;
        worst = std::max(worst, f.clamp);
      }
    }
    if (clamped > 0) {
      std::ostringstream os;
      os << "fidelity: clamped into [0, 1] at " << clamped << " samples (largest excess " << worst
         << ")";
      res.warnings.push_back(os.str());
    }
    res.series.add("one_minus_fidelity", infidelity);
  }

  if (c.has_baths && (exact_dd || eff)) {
    SteadyStateInfo info;
    if (exact_dd) {
      const CovarianceState ss = steady_state(exact_dd->drift, exact_dd->diffusion);
      info.n_exact_a = occupation_number(reduce_to_oscillator(ss, External::a), c.hbar);
      info.n_exact_b = occupation_number(reduce_to_oscillator(ss, External::b), c.hbar);
    }
    if (eff) {
      const CovarianceState ss = steady_state(eff->model.drift, eff->model.diffusion);
      info.n_effective_a = occupation_number(reduce_to_oscillator(ss, External::a), c.hbar);
      info.effective_residual =
          linalg::max_abs(Matrix(ss.V - eff->model.diffusion / c.zeta));
    }
    res.steady = info;
  }

  if (c.wants("bath_classification")) {
    res.baths = classify_mode_baths(thermal_bath_noise(spec, c.zeta, c.n_th), s0);
  }
  return res;
}

}  // namespace oscbus::runner
