#include "output.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <openssl/evp.h>

#ifndef OSCBUS_VERSION
#define OSCBUS_VERSION "unknown"
#endif

namespace oscbus::runner {

namespace {

std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

double round15(double x) { return std::strtod(fmt15(x).c_str(), nullptr); }

nlohmann::ordered_json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json one_based(const std::vector<int>& modes) {
  auto out = nlohmann::ordered_json::array();
  for (int m : modes) out.push_back(m + 1);
  return out;
}

std::vector<std::string> coordinate_labels(int n_modes, bool effective,
                                           const std::vector<int>& modes) {
  std::vector<std::string> names = {"a", "b"};
  for (int k = 0; k < n_modes - 2; ++k) {
    names.push_back(effective ? "m" + std::to_string(modes[k] + 1) : std::to_string(k + 1));
  }
  std::vector<std::string> out;
  for (const char* prefix : {"q_", "p_"}) {
    for (const auto& n : names) out.push_back(prefix + n);
  }
  return out;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& labels) {
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  out += "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? "," : "") + fmt15(m(r, c));
    out += "\n";
  }
  return out;
}

std::string bath_csv(const std::vector<ModeBath>& baths) {
  std::string out = "mode,kind,q_weight,p_weight,partner\n";
  const int n = static_cast<int>(baths.size());
  for (int k = 0; k < n; ++k) {
    const std::string label = k == 0 ? "a" : k == 1 ? "b" : std::to_string(k - 1);
    const auto& b = baths[k];
    const std::string partner = b.partner < 0    ? ""
                                : b.partner == 0 ? "a"
                                : b.partner == 1 ? "b"
                                                 : std::to_string(b.partner - 1);
    out += label + "," + to_string(b.kind) + "," + fmt15(b.q_weight) + "," + fmt15(b.p_weight) +
           "," + partner + "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

Format format_from_string(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string series_csv(const Series& series) {
  std::string out;
  for (size_t c = 0; c < series.names.size(); ++c) out += (c ? "," : "") + series.names[c];
  out += "\n";
  for (size_t r = 0; r < series.rows(); ++r) {
    for (size_t c = 0; c < series.columns.size(); ++c) {
      out += (c ? "," : "") + fmt15(series.columns[c][r]);
    }
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json series_json(const Series& series) {
  nlohmann::ordered_json out;
  out["columns"] = series.names;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (size_t c = 0; c < series.names.size(); ++c) {
    auto values = nlohmann::ordered_json::array();
    for (double x : series.columns[c]) values.push_back(round15(x));
    data[series.names[c]] = std::move(values);
  }
  out["data"] = std::move(data);
  return out;
}

nlohmann::ordered_json manifest_core(const ExperimentResult& r) {
  nlohmann::ordered_json m;
  m["engine"] = {{"name", "oscbus"}, {"version", OSCBUS_VERSION}};
  m["config"] = serialize_config(r.config);

  nlohmann::ordered_json resolved;
  resolved["Omega"] = r.Omega;
  resolved["resonant_modes"] = one_based(r.resonant_modes);
  resolved["contrast_modes"] = one_based(r.contrast_modes);
  auto spectrum = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < r.spectrum.size(); ++k) spectrum.push_back(r.spectrum(k));
  resolved["spectrum"] = std::move(spectrum);
  m["resolved"] = std::move(resolved);

  m["tolerances"] = r.tolerances;
  m["warnings"] = r.warnings;
  m["columns"] = r.series.names;
  m["samples"] = r.series.rows();

  if (r.rwa) {
    m["rwa_report"] = {{"eps_over_Omega", r.rwa->eps_over_Omega},
                       {"min_offresonant_detuning", finite_or_null(r.rwa->min_offresonant_detuning)},
                       {"degenerate_group", one_based(r.rwa->degenerate_group)},
                       {"warnings", r.rwa->warnings}};
  }
  if (r.closed_form_discrepancy) {
    m["closed_form"] = {{"discrepancy", *r.closed_form_discrepancy},
                        {"diffusion_scalar", r.diffusion_scalar}};
  }
  if (r.steady) {
    nlohmann::ordered_json s;
    if (r.final_exact) {
      s["n_exact_a"] = r.steady->n_exact_a;
      s["n_exact_b"] = r.steady->n_exact_b;
    }
    if (r.final_effective) {
      s["n_effective_a"] = r.steady->n_effective_a;
      s["effective_residual"] = r.steady->effective_residual;
    }
    m["steady_state"] = std::move(s);
  }
  return m;
}

RunSummary write_outputs(const ExperimentResult& r, const std::filesystem::path& dir,
                         Format format, double wall_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  RunSummary summary;
  summary.directory = dir;
  summary.warnings = r.warnings;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    summary.files.push_back({name, sha256_hex(content), content.size()});
  };

  // Auxiliary files first so the JSON series can list them.
  if (r.config.wants("cm_dump")) {
    if (r.final_exact) {
      emit("cm_exact.csv",
           matrix_csv(r.final_exact->V, coordinate_labels(r.final_exact->n_modes(), false, {})));
    }
    if (r.final_effective) {
      emit("cm_effective.csv",
           matrix_csv(r.final_effective->V,
                      coordinate_labels(r.final_effective->n_modes(), true, r.resonant_modes)));
    }
  }
  if (r.config.wants("bath_classification")) emit("bath_classification.csv", bath_csv(r.baths));

  nlohmann::ordered_json core = manifest_core(r);
  if (r.config.wants("rwa_report") && core.contains("rwa_report")) {
    emit("rwa_report.json", core["rwa_report"].dump(2) + "\n");
  }

  if (format == Format::csv) {
    emit("series.csv", series_csv(r.series));
  } else {
    nlohmann::ordered_json doc = series_json(r.series);
    nlohmann::ordered_json embedded = core;
    auto files = nlohmann::ordered_json::array();
    for (const auto& f : summary.files) {
      files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    embedded["files"] = std::move(files);
    doc["manifest"] = std::move(embedded);
    emit("series.json", doc.dump(2) + "\n");
  }

  nlohmann::ordered_json manifest = core;
  manifest["wall_time_seconds"] = wall_seconds;
  auto files = nlohmann::ordered_json::array();
  for (const auto& f : summary.files) {
    files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  manifest["files"] = std::move(files);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

RunSummary run_to_directory(const ExperimentConfig& config, const std::filesystem::path& dir,
                            Format format) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs(result, dir, format, wall);
}

}  // namespace oscbus::runner
