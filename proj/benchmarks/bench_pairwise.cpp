#include <benchmark/benchmark.h>

#include <vector>

#include "epinet/equilibria.hpp"
#include "epinet/pairwise.hpp"

using namespace epinet;

static void BM_PairwiseRhs(benchmark::State& state)
{
    const auto model = state.range(0) == 0 ? PairwiseModel::SIS : PairwiseModel::SIR;
    const auto wc = WeightClasses::random(5, {5.0, 1.25}, {0.2, 0.8});
    const PairwiseSystem sys(model, wc, {1.0, 1.0}, default_closure(wc));
    const auto y = initial_conditions(model, 1000.0, 0.05, wc);
    std::vector<double> dy(sys.dimension());
    for (auto _ : state) {
        sys(0.0, y.values(), dy);
        benchmark::DoNotOptimize(dy.data());
    }
}
BENCHMARK(BM_PairwiseRhs)->Arg(0)->Arg(1);

static void BM_PairwiseIntegration(benchmark::State& state)
{
    const auto wc = WeightClasses::fixed({10.0, 1.25}, {2, 8});
    const PairwiseSystem sys(PairwiseModel::SIR, wc, {0.5, 1.0}, default_closure(wc));
    const auto y = initial_conditions(PairwiseModel::SIR, 1000.0, 0.05, wc);
    IntegratorOptions opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 1e-9;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_pairwise(sys, y, 15.0, opts).ode.size());
}
BENCHMARK(BM_PairwiseIntegration)->Unit(benchmark::kMillisecond);

static void BM_SteadyStateNewton(benchmark::State& state)
{
    const auto wc = WeightClasses::random(5, {10.0, 1.0}, {0.5, 0.5});
    const Closure closure = default_closure(wc);
    const auto guess = initial_conditions(PairwiseModel::SIS, 1000.0, 0.5, wc);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_sis_endemic(wc, {1.0, 1.0}, closure, 1000.0, guess).residual);
}
BENCHMARK(BM_SteadyStateNewton)->Unit(benchmark::kMicrosecond);
