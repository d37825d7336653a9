#include "spinent/critical.hpp"
#include "spinent/measures.hpp"
#include "spinent/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace spinent;

static void BM_Diagonalize(benchmark::State& state) {
    const ModelSpec spec = ModelSpec::ring(static_cast<int>(state.range(0)), 1.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(spec));
}
BENCHMARK(BM_Diagonalize)->DenseRange(2, 8)->Unit(benchmark::kMicrosecond);

static void BM_ThermalPairConcurrence(benchmark::State& state) {
    const PairThermalCurve curve(ModelSpec::ring(static_cast<int>(state.range(0)), 1.0, 0.5), {1, 2});
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(curve.concurrence(t));
        t = t < 3.0 ? t + 0.01 : 0.1;
    }
}
BENCHMARK(BM_ThermalPairConcurrence)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

static void BM_WoottersConcurrence(benchmark::State& state) {
    const DensityMatrix rho = thermal_state(diagonalize(ModelSpec::ring(4, 1.0, 1.0)), 2.0);
    const std::array keep{1, 2};
    const DensityMatrix pair = partial_trace(rho, keep);
    for (auto _ : state) benchmark::DoNotOptimize(concurrence_wootters(pair));
}
BENCHMARK(BM_WoottersConcurrence);

static void BM_ClosedFormConcurrence(benchmark::State& state) {
    const DensityMatrix rho = thermal_state(diagonalize(ModelSpec::ring(4, 1.0, 1.0)), 2.0);
    const CorrelationSet cs = correlations(rho, 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(concurrence_closed_form(cs));
}
BENCHMARK(BM_ClosedFormConcurrence);

static void BM_CriticalTemperature(benchmark::State& state) {
    const PairThermalCurve curve(ModelSpec::ring(static_cast<int>(state.range(0)), 1.0, 1.0), {1, 2});
    for (auto _ : state) benchmark::DoNotOptimize(critical_temperature(curve));
}
BENCHMARK(BM_CriticalTemperature)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_TcCurve(benchmark::State& state) {
    const std::vector<double> deltas = Range{-3.0, 8.0, 0.25}.values();
    const ModelSpec spec = ModelSpec::ring(4, 1.0, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(tc_curve(spec, {1, 2}, deltas, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TcCurve)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
