#include "presets.hpp"

#include <map>

namespace oscbus::runner {

namespace {

// Shared by every chain preset: ten sites, kappa = 20 omega, a and b on
// opposite ends with epsilon = 0.03 omega, resonance with the lowest mode.
constexpr const char* chain_system = R"([system]
topology = "chain"
sites = 10
omega = 1
kappa = 20
Omega = 1
alpha = [10]
beta = [1]
epsilon = 0.03
)";

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> presets = {
      {"fig3", std::string(chain_system) + R"(
[initial]
n_b = 1
n_network = 0

[run]
resonant_mode = 1
t_max = 2000
samples = 4001
outputs = ["occupation_exact", "occupation_effective", "rwa_report"]
)"},
      {"fig4", std::string(chain_system) + R"(
[initial]
n_b = 0
n_network = 0

[run]
resonant_mode = 1
t_max = 2000
samples = 4001
outputs = ["occupation_exact"]
)"},
      // Omega is left to follow the second mode.
      {"fig5", R"([system]
topology = "chain"
sites = 10
omega = 1
kappa = 20
alpha = [10]
beta = [1]
epsilon = 0.03

[initial]
n_b = 1
n_network = 0

[run]
resonant_mode = 2
t_max = 4000
samples = 4001
outputs = ["occupation_closed_form", "rwa_report"]
)"},
      {"fig6", std::string(chain_system) + R"(
[initial]
n_b = 0
n_network = 1

[run]
resonant_mode = 1
t_max = 2000
samples = 4001
outputs = ["occupation_effective", "occupation_closed_form", "rwa_report"]
)"},
      {"fig7", std::string(chain_system) + R"(
[initial]
n_b = 1
n_network = 0

[baths]
zeta = 0.01
n_th = 1

[run]
resonant_mode = 1
t_max = 1500
samples = 3001
outputs = ["occupation_exact", "occupation_effective", "rwa_report"]
)"},
      {"fig8", std::string(chain_system) + R"(
[initial]
n_b = 1
n_network = 0

[run]
resonant_mode = 1
t_max = 2000
samples = 4001
outputs = ["fidelity"]
)"},
      // Omega follows the degenerate pair (modes 2 and 3).
      {"fig10", R"([system]
topology = "triangle"
sites = 3
omega = 1
kappa = 0.3333333333333333
kappa_prime = 0.3333333333333333
alpha = [2]
beta = [3]
epsilon = 0.0016666666666666668

[initial]
n_b = 1
n_network = 0

[run]
resonant_mode = 2
contrast_modes = [3]
t_max = 10000
samples = 4001
outputs = ["occupation_exact", "occupation_effective", "fidelity", "rwa_report"]
)"},
      // Omega follows the lowest mode.
      {"fig12", R"([system]
topology = "momentum_coupled"
sites = 3
omega = 1
kappa = 0.5
gamma = 0.2
alpha = [1]
beta = [3]
epsilon = 0.001

[initial]
n_b = 1
n_network = 0

[run]
resonant_mode = 1
t_max = 20000
samples = 8001
outputs = ["occupation_exact", "occupation_effective", "fidelity", "rwa_report"]
)"},
  };
  return presets;
}

void clear_lines(Value& v) {
  v.line = 0;
  if (auto* list = std::get_if<Value::List>(&v.data)) {
    for (auto& item : *list) clear_lines(item);
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3", "fig4", "fig5",  "fig6",
                                                 "fig7", "fig8", "fig10", "fig12"};
  return names;
}

const std::string& preset_text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

Document preset_document(const std::string& name) {
  Document doc = parse_document(preset_text(name));
  for (auto& [section, entries] : doc) {
    for (auto& [key, value] : entries) clear_lines(value);
  }
  return doc;
}

}  // namespace oscbus::runner
