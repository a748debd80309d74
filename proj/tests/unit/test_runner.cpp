#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <runner/config.hpp>
#include <runner/experiment.hpp>
#include <runner/output.hpp>
#include <runner/presets.hpp>
#include <runner/sweep.hpp>

namespace oscbus::runner {
namespace {

namespace fs = std::filesystem;

const char* short_chain = R"([system]
topology = "chain"
sites = 5
kappa = 4
Omega = 1
alpha = [5]
beta = [1]
epsilon = 0.02

[initial]
n_b = 1

[run]
resonant_mode = 1
t_max = 200
samples = 51
)";

ExperimentConfig short_config(const std::string& extra = {}) {
  return parse_config(std::string(short_chain) + extra);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("oscbus_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

size_t count_lines(const std::string& s) { return static_cast<size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(RunExperiment, DefaultColumnsAndInitialValues) {
  const auto r = run_experiment(short_config());
  EXPECT_EQ(r.series.names,
            (std::vector<std::string>{"t_omega", "n_exact_a", "n_exact_b", "n_eff_a"}));
  EXPECT_EQ(r.series.rows(), 51u);
  EXPECT_EQ(r.series.column("t_omega").back(), 200.0);
  EXPECT_NEAR(r.series.column("n_exact_a").front(), 0.0, 1e-14);
  EXPECT_NEAR(r.series.column("n_eff_a").front(), 0.0, 1e-14);
  EXPECT_NEAR(r.series.column("n_exact_b").front(), 1.0, 1e-14);
  EXPECT_EQ(r.resonant_modes, std::vector<int>{0});
  EXPECT_EQ(r.Omega, 1.0);
  ASSERT_TRUE(r.rwa.has_value());
  EXPECT_NEAR(r.rwa->eps_over_Omega, 0.02, 1e-15);
  // Energy leaves b: the exact and effective a-occupations track each other.
  const auto& ex = r.series.column("n_exact_a");
  const auto& ef = r.series.column("n_eff_a");
  for (size_t i = 0; i < ex.size(); ++i) EXPECT_NEAR(ex[i], ef[i], 0.1);
}

TEST(RunExperiment, OmegaDefaultsToResonantFrequency) {
  std::string text = short_chain;
  text.replace(text.find("Omega = 1\n"), 10, "");
  text.replace(text.find("resonant_mode = 1"), 17, "resonant_mode = 3");
  const auto r = run_experiment(parse_config(text));
  EXPECT_EQ(r.Omega, r.spectrum(2));
  EXPECT_EQ(r.resonant_modes, std::vector<int>{2});
}

TEST(RunExperiment, ResonantFrequencyMustMatchAMode) {
  std::string text = short_chain;
  text.replace(text.find("resonant_mode = 1"), 17, "resonant_frequency = 1.5");
  EXPECT_THROW(run_experiment(parse_config(text)), ConfigError);
}

TEST(RunExperiment, ClosedFormColumns) {
  const auto r = run_experiment(short_config("outputs = [\"occupation_closed_form\"]\n"));
  EXPECT_EQ(r.series.names, (std::vector<std::string>{"t_omega", "tau", "transfer_F",
                                                      "n_closed_a", "n_closed_network"}));
  EXPECT_EQ(r.series.column("tau").back(), 0.02 * 200.0 / 4.0);
}

TEST(RunExperiment, ClosedFormSkippedWithBaths) {
  const auto r = run_experiment(short_config(
      "outputs = [\"occupation_closed_form\"]\n[baths]\nzeta = 0.01\nn_th = 1\n"));
  EXPECT_FALSE(r.series.has("n_closed_a"));
  EXPECT_TRUE(std::any_of(r.warnings.begin(), r.warnings.end(), [](const std::string& w) {
    return w.find("closed form skipped") != std::string::npos;
  }));
}

TEST(RunExperiment, ContrastModesAddNaiveColumn) {
  auto c = parse_config("[run]\nt_max = 200\nsamples = 21\n", "fig10");
  const auto r = run_experiment(c);
  EXPECT_EQ(r.resonant_modes, (std::vector<int>{1, 2}));
  EXPECT_TRUE(r.series.has("n_naive_a"));
  EXPECT_TRUE(r.series.has("one_minus_fidelity"));
}

TEST(RunExperiment, NonlocalBathHintsAtRemedy) {
  const std::string text = R"([system]
topology = "custom"
hessian = [[1.3, 0.2, 0.1, 0.05],
           [0.2, 1.1, 0, 0.1],
           [0.1, 0, 0.9, 0.15],
           [0.05, 0.1, 0.15, 1.2]]
alpha = [1]
beta = [2]
epsilon = 0.01

[baths]
zeta = 0.01
n_th = 1

[run]
resonant_mode = 1
t_max = 10
samples = 3
outputs = ["occupation_effective"]
)";
  try {
    run_experiment(parse_config(text));
    FAIL() << "expected a structural violation";
  } catch (const StructuralViolation& e) {
    EXPECT_NE(std::string(e.what()).find("exact outputs only"), std::string::npos);
  }
}

TEST(RunExperiment, OpenSystemSteadyState) {
  const auto r = run_experiment(short_config("[baths]\nzeta = 0.05\nn_th = 0.5\n"));
  ASSERT_TRUE(r.steady.has_value());
  EXPECT_NEAR(r.steady->n_exact_a, 0.5, 0.05);
  EXPECT_LT(r.steady->effective_residual, 1e-10);
}

TEST(Output, CsvHeaderAndRowCount) {
  auto c = parse_config("[run]\nt_max = 100\nsamples = 41\n", "fig8");
  const auto dir = fresh_dir("csv");
  const auto s = run_to_directory(c, dir, Format::csv);
  const std::string csv = slurp(dir / "series.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_omega,one_minus_fidelity");
  EXPECT_EQ(count_lines(csv), 42u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  ASSERT_EQ(s.files.size(), 1u);
  EXPECT_EQ(s.files[0].name, "series.csv");
}

TEST(Output, ManifestDigestsMatchFiles) {
  const auto dir = fresh_dir("json");
  run_to_directory(short_config("outputs = [\"occupation_exact\", \"cm_dump\", \"rwa_report\"]\n"),
                   dir, Format::json);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["engine"]["name"], "oscbus");
  EXPECT_TRUE(manifest.contains("wall_time_seconds"));
  EXPECT_EQ(manifest["resolved"]["resonant_modes"], nlohmann::json::array({1}));
  std::set<std::string> names;
  for (const auto& f : manifest["files"]) {
    const std::string content = slurp(dir / f["name"].get<std::string>());
    EXPECT_EQ(f["sha256"], sha256_hex(content));
    EXPECT_EQ(f["bytes"], content.size());
    names.insert(f["name"]);
  }
  EXPECT_EQ(names, (std::set<std::string>{"cm_exact.csv", "cm_effective.csv", "rwa_report.json",
                                          "series.json"}));
  const auto series = nlohmann::json::parse(slurp(dir / "series.json"));
  EXPECT_EQ(series["data"]["n_exact_a"].size(), 51u);
  EXPECT_FALSE(series["manifest"].contains("wall_time_seconds"));
  // The embedded config echo parses back to the same configuration.
  EXPECT_EQ(parse_config(series["manifest"]["config"].get<std::string>()),
            parse_config(manifest["config"].get<std::string>()));
  const std::string cm = slurp(dir / "cm_exact.csv");
  EXPECT_EQ(cm.substr(0, cm.find('\n')), "q_a,q_b,q_1,q_2,q_3,q_4,q_5,p_a,p_b,p_1,p_2,p_3,p_4,p_5");
}

TEST(Output, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Output, RepeatedRunsAreIdentical) {
  const auto c = short_config();
  const auto a = fresh_dir("repeat_a");
  const auto b = fresh_dir("repeat_b");
  const auto sa = run_to_directory(c, a, Format::json);
  const auto sb = run_to_directory(c, b, Format::json);
  ASSERT_EQ(sa.files.size(), sb.files.size());
  for (size_t i = 0; i < sa.files.size(); ++i) EXPECT_EQ(sa.files[i].sha256, sb.files[i].sha256);
}

TEST(Output, BathClassificationFile) {
  const auto dir = fresh_dir("baths");
  run_to_directory(short_config("outputs = [\"bath_classification\", \"occupation_exact\"]\n"
                                "[baths]\nzeta = 0.01\nn_th = 1\n"),
                   dir, Format::csv);
  const std::string csv = slurp(dir / "bath_classification.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "mode,kind,q_weight,p_weight,partner");
  EXPECT_EQ(count_lines(csv), 8u);
  EXPECT_NE(csv.find("squeezed_local"), std::string::npos);
}

TEST(Sweep, PointsMatchIndividualRuns) {
  const Document doc = parse_document(short_chain);
  const auto out = fresh_dir("sweep");
  const auto points = plan_sweep(doc, "", parse_sweep("beta=[1],[3]"), out);
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[1].config.beta, std::vector<int>{3});
  const auto summaries = run_sweep(points, Format::csv, 2);
  ASSERT_EQ(summaries.size(), 2u);
  for (size_t i = 0; i < points.size(); ++i) {
    const auto single = fresh_dir("sweep_single_" + std::to_string(i));
    run_to_directory(points[i].config, single, Format::csv);
    EXPECT_EQ(slurp(single / "series.csv"), slurp(points[i].directory / "series.csv"));
  }
  EXPECT_NE(slurp(points[0].directory / "series.csv"), slurp(points[1].directory / "series.csv"));
}

TEST(Sweep, InvalidPointFailsBeforeRunning) {
  const Document doc = parse_document(short_chain);
  const auto out = fresh_dir("sweep_bad");
  try {
    plan_sweep(doc, "", parse_sweep("beta=[1],[99]"), out);
    FAIL() << "expected a config error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sweep point"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(out));
}

TEST(Presets, EveryPresetRunsWithinBudget) {
  for (const auto& name : preset_names()) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_experiment(parse_config("", name));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LE(elapsed, 60.0) << name;
    EXPECT_EQ(r.series.rows(), static_cast<size_t>(r.config.samples)) << name;
  }
}

}  // namespace
}  // namespace oscbus::runner
