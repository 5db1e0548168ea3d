#include <benchmark/benchmark.h>

#include "epinet/gillespie.hpp"
#include "epinet/netgen.hpp"

using namespace epinet;

// Events per second of an SIS run held near its endemic state.
static void BM_GillespieSteps(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto wc = WeightClasses::random(5, {5.0, 1.25}, {0.2, 0.8});
    const auto net = build_weighted_network(n, wc, 1);
    GillespieSimulator sim(net, wc, {1.0, 1.0}, Dynamics::SIS, 2, SimulationOptions{0, false});
    sim.seed_random(0.5);
    for (auto _ : state) {
        if (!sim.step(1e300))
            state.SkipWithError("epidemic died out");
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_GillespieSteps)->Arg(1000)->Arg(100000);

static void BM_SirRun(benchmark::State& state)
{
    const auto wc = WeightClasses::fixed({10.0, 1.25}, {2, 8});
    const auto net = build_weighted_network(1000, wc, 3);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sir(net, wc, {0.5, 1.0}, 0.05, 1e300, ++seed).events);
}
BENCHMARK(BM_SirRun)->Unit(benchmark::kMillisecond);
