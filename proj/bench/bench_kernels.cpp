// Serial references against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "ecmap/sieve.hpp"

using namespace ecmap;

namespace {

Curve const curve(Int(0), Int(1));
Int const shift(2);

void count_serial(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::count_squarefree_box(curve, shift, state.range(0), 4, 1, 1));
}

void count_parallel(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(count_squarefree_box(curve, shift, state.range(0), 4, 1, 1));
}

void census_serial(benchmark::State & state)
{
    PointSetSummary none;
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::suitability_census(curve, none, shift, state.range(0), 0.1, 0.05));
}

void census_parallel(benchmark::State & state)
{
    PointSetSummary none;
    for (auto _ : state)
        benchmark::DoNotOptimize(suitability_census(curve, none, shift, state.range(0), 0.1, 0.05));
}

void search_serial(benchmark::State & state)
{
    SearchConfig cfg;
    cfg.n = 0;
    cfg.Y = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::search_psi(cfg));
}

void search_parallel(benchmark::State & state)
{
    SearchConfig cfg;
    cfg.n = 0;
    cfg.Y = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(search_psi(cfg));
}

} // namespace

BENCHMARK(count_serial)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(count_parallel)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(census_serial)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(census_parallel)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(search_serial)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(search_parallel)->Arg(120)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
