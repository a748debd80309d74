#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <oscbus/effective.hpp>
#include <oscbus/observables.hpp>

namespace {

using namespace oscbus;

Matrix random_positive_definite(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) a(r, c) = g(rng);
  }
  return a * a.transpose() / dim + 0.5 * Matrix::Identity(dim, dim);
}

SystemSpec chain_system(int sites) {
  SystemSpec spec;
  spec.network = NetworkSpec{Topology::chain, sites, 1.0, 20.0, 0.0, 0.0, {}};
  spec.Omega = 1.0;
  spec.attachments = {{External::a, sites - 1, 0.03}, {External::b, 0, 0.03}};
  return spec;
}

void BM_Williamson(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QuadraticForm m(random_positive_definite(2 * n, 7));
  for (auto _ : state) benchmark::DoNotOptimize(williamson(m));
}
BENCHMARK(BM_Williamson)->Arg(2)->Arg(8)->Arg(32)->Arg(100);

void BM_PropagateChain(benchmark::State& state) {
  const SystemSpec spec = chain_system(static_cast<int>(state.range(0)));
  const auto dd = drift_and_diffusion(assemble_system_hessian(spec), thermal_bath_noise(spec, 0.0, 0.0));
  const auto v0 = build_initial_cm({1.0, 0.0}, spec.n_network(), ModelKind::full);
  std::vector<double> times(4001);
  for (size_t i = 0; i < times.size(); ++i) times[i] = 0.5 * static_cast<double>(i);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_cm(dd.drift, dd.diffusion, v0, times));
}
BENCHMARK(BM_PropagateChain)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_AnalyticPropagator(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic_propagator_6x6(0.3162, -0.3162, 0.03, t));
    t += 1.0;
  }
}
BENCHMARK(BM_AnalyticPropagator);

void BM_ExpmPropagator(benchmark::State& state) {
  const auto w = network_williamson(chain_system(10).network);
  const auto model = build_effective_hessian(w, std::vector<int>{0}, chain_system(10).attachments);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linalg::expm(model.drift * t));
    t += 1.0;
  }
}
BENCHMARK(BM_ExpmPropagator);

void BM_SteadyState(benchmark::State& state) {
  const SystemSpec spec = chain_system(static_cast<int>(state.range(0)));
  const auto dd =
      drift_and_diffusion(assemble_system_hessian(spec), thermal_bath_noise(spec, 0.01, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(dd.drift, dd.diffusion));
}
BENCHMARK(BM_SteadyState)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
