#include <cmath>

#include <benchmark/benchmark.h>

#include "orlicz_gauge/convergence.hpp"
#include "orlicz_gauge/hk_integral.hpp"
#include "orlicz_gauge/young_modular.hpp"

using namespace orlicz;

namespace {

const WeightedMeasure kUnit(Interval{0.0, 1.0});

void BM_IntegrateOscillatory(benchmark::State& state) {
  const auto f = VectorFunctionSpec::scalar(FunctionSpec::hk_pathological(2, 2), {0, 1});
  QuadratureConfig cfg;
  cfg.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  std::size_t cells = 0;
  for (auto _ : state) {
    const IntegralResult r = hk_integrate(f, kUnit, cfg);
    cells = r.cells_used;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["cells"] = static_cast<double>(cells);
}
BENCHMARK(BM_IntegrateOscillatory)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_IntegrateSingular(benchmark::State& state) {
  const double alpha = -static_cast<double>(state.range(0)) / 10.0;
  const auto f = VectorFunctionSpec::scalar(FunctionSpec::monomial(alpha), {0, 1});
  QuadratureConfig cfg;
  cfg.tol = 1e-9;
  for (auto _ : state) benchmark::DoNotOptimize(hk_integrate(f, kUnit, cfg).value);
}
BENCHMARK(BM_IntegrateSingular)->Arg(5)->Arg(9)->Unit(benchmark::kMicrosecond);

void BM_LuxemburgNorm(benchmark::State& state) {
  const auto f = VectorFunctionSpec::scalar(FunctionSpec::monomial(1), {0, 1});
  const auto th = YoungFunctionSpec::power(2);
  QuadratureConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(f, th, kUnit, cfg).value);
}
BENCHMARK(BM_LuxemburgNorm)->Unit(benchmark::kMicrosecond);

void BM_SupRiemannNorm(benchmark::State& state) {
  const auto f = VectorFunctionSpec::scalar(FunctionSpec::trig(1, 6.283185307179586, 0), {0, 1});
  const int budget = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sup_riemann_norm(f, kUnit, budget, 1).value);
}
BENCHMARK(BM_SupRiemannNorm)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_AnalyzeExponentialFamily(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const WeightedMeasure m(Interval{0.0, 2.0});
  const SequenceSpec seq(
      [](int n) {
        const double a = 1.0 / (n * (std::exp(n) - n - 1.0));
        return VectorFunctionSpec::scalar(
            FunctionSpec::combination({{static_cast<double>(n), FunctionSpec::indicator(0, a)}}),
            {0, 2});
      },
      VectorFunctionSpec::scalar(FunctionSpec::constant(0), {0, 2}), n_max);
  const auto grid = default_convergence_grid();
  QuadratureConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        analyze_sequence(seq, YoungFunctionSpec::exponential(), m, grid, cfg).n_max);
  }
}
BENCHMARK(BM_AnalyzeExponentialFamily)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
