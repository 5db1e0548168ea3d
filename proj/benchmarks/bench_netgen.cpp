#include <benchmark/benchmark.h>

#include "epinet/netgen.hpp"

using namespace epinet;

static void BM_RandomLayout(benchmark::State& state)
{
    const auto wc = WeightClasses::random(5, {5.0, 1.25}, {0.2, 0.8});
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_weighted_network(static_cast<std::size_t>(state.range(0)), wc, ++seed));
}
BENCHMARK(BM_RandomLayout)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_FixedLayout(benchmark::State& state)
{
    const auto wc = WeightClasses::fixed({10.0, 1.25}, {2, 8});
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_weighted_network(static_cast<std::size_t>(state.range(0)), wc, ++seed));
}
BENCHMARK(BM_FixedLayout)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ErdosRenyi(benchmark::State& state)
{
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_erdos_renyi(static_cast<std::size_t>(state.range(0)), 5.0, ++seed));
}
BENCHMARK(BM_ErdosRenyi)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
