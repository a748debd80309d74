#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <oscbus/networks.hpp>

namespace oscbus::runner {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A parsed config value: scalar or (possibly nested) list.
struct Value {
  using List = std::vector<Value>;
  std::variant<bool, long long, double, std::string, List> data;
  int line = 0;

  bool is_number() const;
  double as_number(const std::string& path) const;
  long long as_integer(const std::string& path) const;
  bool as_bool(const std::string& path) const;
  const std::string& as_string(const std::string& path) const;
  const List& as_list(const std::string& path) const;
};

// section -> key -> value, in file order irrelevant (canonical output sorts).
using Document = std::map<std::string, std::map<std::string, Value>>;

Document parse_document(const std::string& text);
Value parse_value(const std::string& text, int line = 0);

struct ExperimentConfig {
  // [system]
  Topology topology = Topology::chain;
  int sites = 0;
  double omega = 1.0;
  double kappa = 0.0;
  double kappa_prime = 0.0;
  double gamma = 0.0;
  std::optional<double> Omega;
  std::vector<int> alpha;  // 1-based sites
  std::vector<int> beta;
  double epsilon = 0.0;
  std::vector<double> epsilon_alpha;  // empty: all use epsilon
  std::vector<double> epsilon_beta;
  double hbar = 1.0;
  std::vector<std::vector<double>> hessian;
  // [initial]
  double n_b = 0.0;
  double n_network = 0.0;
  // [baths]
  bool has_baths = false;
  double zeta = 0.0;
  double n_th = 0.0;
  // [run]
  std::string preset;
  std::optional<int> resonant_mode;  // 1-based
  std::optional<double> resonant_frequency;
  std::optional<double> resonance_tolerance;
  double t_max = 0.0;  // in units of 1/omega
  int samples = 0;
  std::vector<std::string> outputs;
  std::vector<int> contrast_modes;  // 1-based
  bool allow_large = false;
  std::string effective_initial = "projected";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  SystemSpec system_spec() const;
  bool wants(const std::string& output) const;
};

inline const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> names = {
      "occupation_exact", "occupation_effective", "occupation_closed_form", "fidelity",
      "cm_dump",          "bath_classification",  "rwa_report"};
  return names;
}

/// Parses, expands the preset (explicit keys win) and validates.
/// `preset_override` replaces any [run] preset key.
ExperimentConfig parse_config(const std::string& text, const std::string& preset_override = {});
ExperimentConfig config_from_document(Document doc, const std::string& preset_override = {});

/// Canonical, fully expanded text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Sets `section.key` (or a bare key, searched in every section) in a
/// document from a value literal; used by parameter sweeps.
void set_document_value(Document& doc, const std::string& key, const std::string& literal);

}  // namespace oscbus::runner
