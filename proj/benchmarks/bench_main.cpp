#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sdde/catalog.hpp"
#include "sdde/ergodicity.hpp"
#include "sdde/integrator.hpp"
#include "sdde/sensitivity.hpp"
#include "sdde/transport.hpp"

using namespace sdde;

static void BM_EulerMaruyama(benchmark::State& state) {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 10.0);
  const auto model = make_model("tanh-smooth");
  const auto x0 = Segment::constant(grid, 0.5);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    GaussianNoise noise(seed++, grid.dt);
    benchmark::DoNotOptimize(em_simulate(model, x0, grid.horizon_steps, noise));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.horizon_steps));
}
BENCHMARK(BM_EulerMaruyama);

static void BM_Assignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cost(n * n);
  for (double& c : cost) c = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost, n));
}
BENCHMARK(BM_Assignment)->Arg(64)->Arg(256)->Arg(512);

static void BM_UniformTransport(benchmark::State& state) {
  const auto na = static_cast<std::size_t>(state.range(0));
  const std::size_t nb = na + na / 2;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cost(na * nb);
  for (double& c : cost) c = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_uniform_transport(cost, na, nb));
}
BENCHMARK(BM_UniformTransport)->Arg(32)->Arg(128);

static void BM_GradientEstimate(benchmark::State& state) {
  const auto grid = TimeGrid::from_times(0.01, 1.0, 2.0);
  const auto model = make_model("tanh-smooth");
  const auto x = Segment::constant(grid, 0.5);
  const auto z = Segment::constant(grid, 1.0);
  const Functional f = [](SegmentView s) { return std::tanh(s.now()[0]); };
  const FunctionalGradient g = [](SegmentView s, SegmentView u) {
    const double c = std::cosh(s.now()[0]);
    return u.now()[0] / (c * c);
  };
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_gradient(model, x, z, f, g, 2.0, lambda, SensitivityOptions{1000, 1, 1}));
  }
}
BENCHMARK(BM_GradientEstimate)->Arg(0)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
