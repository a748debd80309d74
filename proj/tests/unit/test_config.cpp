#include <gtest/gtest.h>

#include <runner/config.hpp>
#include <runner/presets.hpp>
#include <runner/sweep.hpp>

namespace oscbus::runner {
namespace {

std::string message_of(const std::string& text, const std::string& preset = {}) {
  try {
    parse_config(text, preset);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

const char* minimal_chain = R"([system]
topology = "chain"
sites = 4
kappa = 2
alpha = [4]
beta = [1]
epsilon = 0.01

[run]
resonant_mode = 1
t_max = 100
samples = 11
)";

TEST(Presets, ChainCaptionValues) {
  for (const auto* name : {"fig3", "fig4", "fig6", "fig7", "fig8"}) {
    const auto c = parse_config("", name);
    EXPECT_EQ(c.topology, Topology::chain) << name;
    EXPECT_EQ(c.sites, 10);
    EXPECT_EQ(c.omega, 1.0);
    EXPECT_EQ(c.kappa, 20.0);
    EXPECT_EQ(c.Omega, 1.0);
    EXPECT_EQ(c.alpha, std::vector<int>{10});
    EXPECT_EQ(c.beta, std::vector<int>{1});
    EXPECT_EQ(c.epsilon, 0.03);
    EXPECT_EQ(c.preset, name);
  }
  EXPECT_EQ(parse_config("", "fig3").n_b, 1.0);
  EXPECT_EQ(parse_config("", "fig4").n_b, 0.0);
  EXPECT_EQ(parse_config("", "fig6").n_network, 1.0);
  const auto fig7 = parse_config("", "fig7");
  EXPECT_TRUE(fig7.has_baths);
  EXPECT_EQ(fig7.zeta, 0.01);
  EXPECT_EQ(fig7.n_th, 1.0);
  EXPECT_EQ(fig7.t_max, 1500.0);
}

TEST(Presets, TriangleAndMomentumCoupled) {
  const auto fig10 = parse_config("", "fig10");
  EXPECT_EQ(fig10.topology, Topology::triangle);
  EXPECT_NEAR(fig10.kappa, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(fig10.kappa_prime, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(fig10.epsilon, 1.0 / 600.0, 1e-15);
  EXPECT_EQ(fig10.resonant_mode, 2);
  EXPECT_EQ(fig10.contrast_modes, std::vector<int>{3});
  EXPECT_EQ(fig10.t_max, 1e4);

  const auto fig12 = parse_config("", "fig12");
  EXPECT_EQ(fig12.topology, Topology::momentum_coupled);
  EXPECT_EQ(fig12.kappa, 0.5);
  EXPECT_EQ(fig12.gamma, 0.2);
  EXPECT_EQ(fig12.epsilon, 1e-3);
  EXPECT_EQ(fig12.alpha, std::vector<int>{1});
  EXPECT_EQ(fig12.beta, std::vector<int>{3});
  EXPECT_EQ(fig12.t_max, 2e4);
}

TEST(Presets, UnknownNameIsConfigError) {
  EXPECT_THROW(preset_text("fig99"), ConfigError);
  EXPECT_TRUE(contains(message_of("[run]\npreset = \"fig99\"\n"), "line 2"));
}

TEST(ParseConfig, EmptyDocumentListsMissingKeys) {
  const auto m = message_of("");
  EXPECT_TRUE(contains(m, "missing required keys"));
  for (const auto* key : {"system.topology", "system.alpha", "system.beta", "system.epsilon",
                          "run.t_max", "run.samples"}) {
    EXPECT_TRUE(contains(m, key)) << key;
  }
}

TEST(ParseConfig, UnknownKeyReportsLine) {
  const auto m = message_of(std::string(minimal_chain) + "spring = 4\n");
  EXPECT_TRUE(contains(m, "line 13")) << m;
  EXPECT_TRUE(contains(m, "run.spring")) << m;
  EXPECT_TRUE(contains(message_of("[bogus]\nx = 1\n"), "unknown section"));
  EXPECT_TRUE(contains(message_of("x = 1\n"), "outside of any"));
}

TEST(ParseConfig, TypeMismatchNamesTheKey) {
  std::string text = minimal_chain;
  text.replace(text.find("sites = 4"), 9, "sites = \"four\"");
  const auto m = message_of(text);
  EXPECT_TRUE(contains(m, "line 3")) << m;
  EXPECT_TRUE(contains(m, "system.sites")) << m;
  EXPECT_TRUE(contains(m, "integer")) << m;
}

TEST(ParseConfig, DuplicateKeyIsRejected) {
  EXPECT_TRUE(contains(message_of(std::string(minimal_chain) + "samples = 3\n"), "duplicate"));
}

TEST(ParseConfig, CommentsAndMultiLineLists) {
  const std::string text = R"(# leading comment
[system]
topology = chain   # bare identifier
sites = 4
kappa = 2
alpha = [
  4,  # last site
  3,
]
beta = [1]
epsilon_alpha = [0.01, 0.02]
epsilon_beta = [0.03]

[run]
resonant_mode = 1
t_max = 1e2
samples = 11
outputs = ["occupation_exact"]
)";
  const auto c = parse_config(text);
  EXPECT_EQ(c.alpha, (std::vector<int>{4, 3}));
  EXPECT_EQ(c.epsilon_alpha, (std::vector<double>{0.01, 0.02}));
  EXPECT_EQ(c.t_max, 100.0);
  const auto spec = c.system_spec();
  ASSERT_EQ(spec.attachments.size(), 3u);
  EXPECT_EQ(spec.attachments[0].site, 3);
  EXPECT_EQ(spec.attachments[2].external, External::b);
  EXPECT_EQ(spec.attachments[2].epsilon, 0.03);
}

TEST(ParseConfig, Defaults) {
  const auto c = parse_config(minimal_chain);
  EXPECT_EQ(c.omega, 1.0);
  EXPECT_EQ(c.hbar, 1.0);
  EXPECT_FALSE(c.has_baths);
  EXPECT_EQ(c.effective_initial, "projected");
  EXPECT_EQ(c.outputs, (std::vector<std::string>{"occupation_exact", "occupation_effective",
                                                 "rwa_report"}));
}

TEST(ParseConfig, Constraints) {
  auto with = [](const std::string& from, const std::string& to) {
    std::string text = minimal_chain;
    text.replace(text.find(from), from.size(), to);
    return message_of(text);
  };
  EXPECT_TRUE(contains(with("samples = 11", "samples = 1"), "run.samples"));
  EXPECT_TRUE(contains(with("t_max = 100", "t_max = -1"), "run.t_max"));
  EXPECT_TRUE(contains(with("alpha = [4]", "alpha = [5]"), "outside 1..4"));
  EXPECT_TRUE(contains(with("epsilon = 0.01", "epsilon = 0"), "system.epsilon"));
  EXPECT_TRUE(contains(with("resonant_mode = 1", "resonant_mode = 1\nresonant_frequency = 1"),
                       "not both"));
  EXPECT_TRUE(contains(with("resonant_mode = 1", ""), "resonant_mode"));
  EXPECT_TRUE(contains(with("samples = 11", "samples = 11\noutputs = [\"movie\"]"), "movie"));
  EXPECT_TRUE(contains(with("samples = 11", "samples = 11\noutputs = [\"bath_classification\"]"),
                       "[baths]"));
  EXPECT_TRUE(contains(with("kappa = 2", "kappa = -3"), "system:"));
  EXPECT_TRUE(contains(with("topology = \"chain\"", "topology = \"ring\""), "system.topology"));
}

TEST(ParseConfig, LargeExactModelNeedsOptIn) {
  std::string text = minimal_chain;
  text.replace(text.find("sites = 4"), 9, "sites = 201");
  EXPECT_TRUE(contains(message_of(text), "allow_large"));
  EXPECT_NO_THROW(parse_config(text + "allow_large = true\n"));
  // The effective model alone has no size limit.
  EXPECT_NO_THROW(parse_config(text + "outputs = [\"occupation_effective\"]\n"));
}

TEST(ParseConfig, UserKeysOverridePreset) {
  const auto c = parse_config("[system]\nepsilon = 0.01\n[run]\nresonant_mode = 3\n", "fig3");
  EXPECT_EQ(c.epsilon, 0.01);
  EXPECT_EQ(c.resonant_mode, 3);
  EXPECT_EQ(c.kappa, 20.0);
  const auto f = parse_config("[run]\nresonant_frequency = 1\n", "fig3");
  EXPECT_FALSE(f.resonant_mode.has_value());
  EXPECT_EQ(f.resonant_frequency, 1.0);
  // The command-line preset wins over the file's.
  EXPECT_EQ(parse_config("[run]\npreset = \"fig4\"\n", "fig8").preset, "fig8");
}

TEST(SerializeConfig, RoundTripsEveryPreset) {
  for (const auto& name : preset_names()) {
    const auto c = parse_config("", name);
    const auto text = serialize_config(c);
    EXPECT_EQ(parse_config(text), c) << name;
    EXPECT_EQ(serialize_config(parse_config(text)), text) << name;
  }
}

TEST(SerializeConfig, RoundTripsCustomTopology) {
  const std::string text = R"([system]
topology = "custom"
hessian = [[1.3, 0.2, 0, 0], [0.2, 1.1, 0, 0], [0, 0, 1.3, 0.2], [0, 0, 0.2, 1.1]]
alpha = [1]
beta = [2]
epsilon = 0.1234567890123
hbar = 2

[baths]
zeta = 0.003
n_th = 0.25

[run]
resonant_frequency = 1.0
resonance_tolerance = 0.5
t_max = 10
samples = 3
outputs = ["occupation_exact"]
)";
  const auto c = parse_config(text);
  EXPECT_EQ(c.sites, 2);
  EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(SetDocumentValue, ResolvesBareKeys) {
  Document doc = parse_document(minimal_chain);
  set_document_value(doc, "beta", "[2]");
  set_document_value(doc, "system.epsilon", "0.02");
  set_document_value(doc, "zeta", "0.1");
  EXPECT_EQ(doc["system"]["beta"].as_list("beta").size(), 1u);
  EXPECT_EQ(doc["system"]["epsilon"].as_number("epsilon"), 0.02);
  EXPECT_EQ(doc["baths"]["zeta"].as_number("zeta"), 0.1);
  EXPECT_THROW(set_document_value(doc, "spring", "1"), ConfigError);
  EXPECT_THROW(set_document_value(doc, "run.kappa", "1"), ConfigError);
}

TEST(ParseSweep, SplitsOutsideBrackets) {
  const auto s = parse_sweep("alpha=[1,2],[3],\"x,y\"");
  EXPECT_EQ(s.key, "alpha");
  EXPECT_EQ(s.values, (std::vector<std::string>{"[1,2]", "[3]", "\"x,y\""}));
  EXPECT_THROW(parse_sweep("novalue"), ConfigError);
  EXPECT_THROW(parse_sweep("beta="), ConfigError);
}

}  // namespace
}  // namespace oscbus::runner
