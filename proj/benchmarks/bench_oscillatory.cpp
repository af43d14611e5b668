#include <benchmark/benchmark.h>

#include <complex>

#include "oscilab/oscillatory.hpp"

using namespace oscilab;

static void BM_EvaluateT(benchmark::State& state) {
    const PhaseFunction phase = PhaseFunction::extension(Surface::paraboloid(3));
    const YDomain domain{{-0.5, -0.5}, {0.5, 0.5}};
    const double h = 1.0 / state.range(0);
    const SampledField f = SampledField::constant(domain, h);
    const std::vector<Vec> xs = {{0.3, -0.2, 2.0}};
    for (auto _ : state) {
        auto out = evaluate_T(phase, f, xs);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}
BENCHMARK(BM_EvaluateT)->RangeMultiplier(2)->Range(64, 512);

static void BM_EvaluateTTwistedElliptic(benchmark::State& state) {
    const PhaseFunction phase = PhaseFunction::twisted_elliptic(32.0);
    const YDomain domain{{0.0, 0.0}, {1.0, 1.0}};
    const double h = 1.0 / state.range(0);
    const SampledField f = SampledField::constant(domain, h);
    const std::vector<Vec> xs = {{0.1, 0.07, 0.7}};
    for (auto _ : state) {
        auto out = evaluate_T(phase, f, xs);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}
BENCHMARK(BM_EvaluateTTwistedElliptic)->RangeMultiplier(2)->Range(1024, 4096);

BENCHMARK_MAIN();
