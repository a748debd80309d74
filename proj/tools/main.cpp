#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "runner/config.hpp"
#include "runner/output.hpp"
#include "runner/presets.hpp"
#include "runner/sweep.hpp"

namespace {

using namespace oscbus::runner;

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

std::string read_config(const std::string& path) {
  if (path.empty()) return {};
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_warnings(const RunSummary& s) {
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
}

int command_run(const std::string& path, const std::string& out, const std::string& format_name,
                const std::string& preset, const std::string& sweep_arg) {
  if (path.empty() && preset.empty()) throw ConfigError("run needs a config path or --preset");
  const Format format = format_from_string(format_name);
  const Document doc = parse_document(read_config(path));
  if (sweep_arg.empty()) {
    const RunSummary s = run_to_directory(config_from_document(doc, preset), out, format);
    print_warnings(s);
    for (const auto& f : s.files) std::cout << (s.directory / f.name).string() << "\n";
    return kOk;
  }
  const auto points = plan_sweep(doc, preset, parse_sweep(sweep_arg), out);
  const auto summaries = run_sweep(points, format, sweep_threads());
  for (const auto& s : summaries) {
    print_warnings(s);
    std::cout << s.directory.string() << "\n";
  }
  return kOk;
}

int command_expand(const std::string& path, const std::string& preset) {
  if (path.empty() && preset.empty()) throw ConfigError("expand needs a config path or --preset");
  std::cout << serialize_config(parse_config(read_config(path), preset));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy transport through oscillator networks: exact and effective models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string preset;
  std::string sweep;

  auto* run = app.add_subcommand("run", "Run an experiment and write series and a manifest");
  run->add_option("config", config_path, "Config file ('-' for stdin)");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "Series format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run->add_option("--preset", preset, "Preset to expand (overrides the config's run.preset)")
      ->check(CLI::IsMember(preset_names()));
  run->add_option("--sweep", sweep, "Parameter sweep KEY=v1,v2,...");

  auto* expand = app.add_subcommand("expand", "Print the canonical, fully expanded config");
  expand->add_option("config", config_path, "Config file ('-' for stdin)");
  expand->add_option("--preset", preset, "Preset to expand")->check(CLI::IsMember(preset_names()));

  auto* list = app.add_subcommand("presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return command_run(config_path, out_dir, format, preset, sweep);
    if (*expand) return command_expand(config_path, preset);
    if (*list) {
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const oscbus::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
  return kOk;
}
