#include <benchmark/benchmark.h>

#include "oscilab/kakeya.hpp"

using namespace oscilab;

namespace {

TubeFamily bush(double delta) {
    TubeFamily fam;
    fam.ambient_dim = 3;
    fam.delta = delta;
    const int side = static_cast<int>(std::lround(1.0 / delta));
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            const Vec dir =
                normalized(Vec{(i + 0.5) * delta - 0.5, (j + 0.5) * delta - 0.5, 1.0});
            fam.tubes.push_back(
                Tube{PolyCurve::segment(Vec(3, 0.0), dir), delta, {dir[0], dir[1]}});
        }
    return fam;
}

}  // namespace

static void BM_Rasterize(benchmark::State& state) {
    const double delta = 1.0 / state.range(0);
    const TubeFamily fam = bush(delta);
    const RasterGrid grid = RasterGrid::unit_ball_box(3, delta / 2.0, 3.0 * delta);
    for (auto _ : state) {
        auto mem = rasterize(grid, fam);
        benchmark::DoNotOptimize(mem);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(fam.tubes.size()));
}
BENCHMARK(BM_Rasterize)->Arg(8)->Arg(16);

static void BM_NearestParameterCubic(benchmark::State& state) {
    const PolyCurve cubic({{0.0, 1.0, 0.2, -0.1}, {0.0, 0.5, -0.3, 0.2}, {0.0, 0.8, 0.1, 0.0}});
    const Vec x{0.4, 0.3, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cubic.nearest_parameter(x));
    }
}
BENCHMARK(BM_NearestParameterCubic);

static void BM_UnionVolumeCurved(benchmark::State& state) {
    const double delta = 1.0 / state.range(0);
    const CurvedFamilyPair pair = curved_family_from_phase(delta);
    const RasterGrid grid = RasterGrid::cover(pair.shifted, delta / 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(union_volume(pair.shifted, grid));
    }
}
BENCHMARK(BM_UnionVolumeCurved)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
