#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <oscbus/effective.hpp>
#include <oscbus/observables.hpp>

#include "config.hpp"

namespace oscbus::runner {

/// Named columns on a shared time grid, in emission order.
struct Series {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> values);
  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
  size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

struct SteadyStateInfo {
  double n_exact_a = 0.0;
  double n_exact_b = 0.0;
  double n_effective_a = 0.0;
  /// max |V̌∞ − Ď/ζ| for the effective model.
  double effective_residual = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  double Omega = 0.0;
  std::vector<int> resonant_modes;  ///< 0-based
  std::vector<int> contrast_modes;  ///< 0-based
  Vector spectrum;
  Series series;
  std::vector<std::string> warnings;
  std::optional<RWAReport> rwa;
  std::optional<SteadyStateInfo> steady;
  std::optional<CovarianceState> final_exact;
  std::optional<CovarianceState> final_effective;
  std::vector<ModeBath> baths;
  std::optional<double> closed_form_discrepancy;
  bool diffusion_scalar = false;
  std::map<std::string, double> tolerances;
};

/// Runs every pipeline the config asks for. No file access; throws
/// oscbus::Error on numeric failure.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// The column order used by every emitter.
const std::vector<std::string>& column_order();

}  // namespace oscbus::runner
