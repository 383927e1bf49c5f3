#include <benchmark/benchmark.h>

#include <random>

#include "eigenmpc/metrics.hpp"

using namespace eigenmpc;

namespace {

PointSet random_points(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    PointSet pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) {
        Vec p(2);
        p << dist(rng), dist(rng);
        pts.push_back(std::move(p));
    }
    return pts;
}

void bm_hausdorff_serial(benchmark::State& state) {
    const auto a = random_points(static_cast<int>(state.range(0)), 1);
    const auto b = random_points(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance_serial(a, b));
}

void bm_hausdorff_parallel(benchmark::State& state) {
    const auto a = random_points(static_cast<int>(state.range(0)), 1);
    const auto b = random_points(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance(a, b));
}

void bm_straightness_serial(benchmark::State& state) {
    const auto a = random_points(static_cast<int>(state.range(0)), 3);
    Vec c(2);
    c << 1.0, 0.5;
    const Vec x_eq = Vec::Zero(2);
    for (auto _ : state) benchmark::DoNotOptimize(straightness_serial(a, c, x_eq));
}

void bm_straightness_parallel(benchmark::State& state) {
    const auto a = random_points(static_cast<int>(state.range(0)), 3);
    Vec c(2);
    c << 1.0, 0.5;
    const Vec x_eq = Vec::Zero(2);
    for (auto _ : state) benchmark::DoNotOptimize(straightness(a, c, x_eq));
}

}  // namespace

BENCHMARK(bm_hausdorff_serial)->Arg(1000)->Arg(4000);
BENCHMARK(bm_hausdorff_parallel)->Arg(1000)->Arg(4000);
BENCHMARK(bm_straightness_serial)->Arg(100000)->Arg(1000000);
BENCHMARK(bm_straightness_parallel)->Arg(100000)->Arg(1000000);

BENCHMARK_MAIN();
