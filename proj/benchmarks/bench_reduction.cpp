#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "oscilab/reduction.hpp"

static std::vector<double> samples(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng) * std::pow(10.0, 6.0 * u(rng));
    return v;
}

static void BM_NaiveSum(benchmark::State& state) {
    const auto v = samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        double s = std::accumulate(v.begin(), v.end(), 0.0);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NaiveSum)->Range(1 << 10, 1 << 18);

static void BM_CompensatedSum(benchmark::State& state) {
    const auto v = samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        oscilab::CompensatedSum acc;
        for (const double x : v) acc.add(x);
        benchmark::DoNotOptimize(acc.value());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompensatedSum)->Range(1 << 10, 1 << 18);

BENCHMARK_MAIN();
