// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "ploc/analytic.hpp"
#include "ploc/ploc_core.hpp"
#include "ploc/spike_model.hpp"
#include "ploc/synthetic.hpp"

namespace {

ploc::PlocConfig bench_config()
{
    ploc::PlocConfig cfg;
    cfg.num_isis = 64;
    cfg.jitter.half_width = 1e-5;
    return cfg;
}

const ploc::Grid<double>& road_rates()
{
    static const auto rates = ploc::build_rate_map(ploc::synthetic::road(), ploc::RateConfig{});
    return rates;
}

void BM_PlocParallel(benchmark::State& state)
{
    const auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ploc::run_ploc(road_rates(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(road_rates().size()));
}
BENCHMARK(BM_PlocParallel)->Unit(benchmark::kMillisecond);

void BM_PlocSerial(benchmark::State& state)
{
    const auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ploc::reference::run_ploc(road_rates(), cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(road_rates().size()));
}
BENCHMARK(BM_PlocSerial)->Unit(benchmark::kMillisecond);

const ploc::NeighborRates kRates{0.31, 0.77, 1.41, 2.23};

void BM_BruteForceParallel(benchmark::State& state)
{
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ploc::brute_force_distribution(1.0, kRates, ploc::Neighborhood::n4(), res, 8));
    }
}
BENCHMARK(BM_BruteForceParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BruteForceSerial(benchmark::State& state)
{
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ploc::reference::brute_force_distribution(1.0, kRates, ploc::Neighborhood::n4(), res, 8));
    }
}
BENCHMARK(BM_BruteForceSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_OmissionsParallel(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(ploc::simulate_omissions({0.02, 0.001}, 1'000'000, 8, 1));
    }
}
BENCHMARK(BM_OmissionsParallel)->Unit(benchmark::kMillisecond);

void BM_OmissionsSerial(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(ploc::reference::simulate_omissions({0.02, 0.001}, 1'000'000, 8, 1));
    }
}
BENCHMARK(BM_OmissionsSerial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
