// Serial reference against the OpenMP kernels. Both produce bitwise equal
// results; only the wall time differs.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ginikit/gini.hpp"
#include "ginikit/kernels.hpp"
#include "ginikit/quadrature.hpp"
#include "ginikit/sampling.hpp"

using namespace ginikit;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::Serial : Exec::Parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_PanelSums(benchmark::State& state) {
  const auto& rule = gauss_legendre(16);
  std::vector<double> edges(static_cast<std::size_t>(state.range(1)) + 1);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = 6.283185307179586 * i / (edges.size() - 1);
  const Integrand f = [](double t) {
    return std::exp(ComplexValue(-0.3 * std::cos(t), std::sin(t))) / (2.0 + std::cos(t));
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::panel_sums(f, edges, rule.nodes, rule.weights, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_PanelSums)->ArgsProduct({{0, 1}, {1 << 12, 1 << 16}})->Unit(benchmark::kMillisecond);

void BM_PairwiseRows(benchmark::State& state) {
  const auto spec = DistributionSpec::negative_binomial(0.06, 0.008);
  std::vector<double> pmf_values(static_cast<std::size_t>(state.range(1)));
  for (std::size_t j = 0; j < pmf_values.size(); ++j) {
    pmf_values[j] = pmf(spec, static_cast<std::int64_t>(j));
  }
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pairwise_rows(pmf_values, exec_of(state)));
  label(state);
}
BENCHMARK(BM_PairwiseRows)->ArgsProduct({{0, 1}, {2000, 10000}})->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  auto sorted = sample(DistributionSpec::exponential(1.0), 1, static_cast<std::size_t>(state.range(1)));
  std::sort(sorted.begin(), sorted.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::bootstrap_sorted_gini(sorted, 200, 2, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_Bootstrap)->ArgsProduct({{0, 1}, {100000}})->Unit(benchmark::kMillisecond);

void BM_SampleNegBinom(benchmark::State& state) {
  const auto spec = DistributionSpec::negative_binomial(0.5, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(spec, 3, static_cast<std::size_t>(state.range(1)), exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_SampleNegBinom)->ArgsProduct({{0, 1}, {1 << 20}})->Unit(benchmark::kMillisecond);

void BM_NBFourier(benchmark::State& state) {
  QuadratureSpec q;
  q.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(gini_nb_fourier(0.06, 0.008, q));
  label(state);
}
BENCHMARK(BM_NBFourier)->ArgsProduct({{0, 1}})->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto spec = DistributionSpec::poisson(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(gini_monte_carlo(spec, 1000000, 4, exec_of(state)));
  label(state);
}
BENCHMARK(BM_MonteCarlo)->ArgsProduct({{0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
