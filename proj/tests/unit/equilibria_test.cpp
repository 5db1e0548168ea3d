#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "epinet/equilibria.hpp"
#include "epinet/errors.hpp"

using namespace epinet;

namespace {

const double kN = 1000.0;

WeightClasses fig7_classes(double p1)
{
    return WeightClasses::random(5, {10.0, 1.0}, {p1, 1.0 - p1});
}

} // namespace

TEST(SteadyState, DiseaseFreeGuessStaysDiseaseFree)
{
    const auto wc = fig7_classes(0.5);
    auto guess = initial_conditions(PairwiseModel::SIS, kN, 0.05, wc);
    guess.S() = kN;
    guess.I() = 0.0;
    for (std::size_t m = 0; m < 2; ++m) {
        guess.pair(Pair::SS, m) = guess.pair_sum(m);
        guess.pair(Pair::SI, m) = 0.0;
        guess.pair(Pair::II, m) = 0.0;
    }
    const auto res = solve_sis_endemic(wc, {1.0, 1.0}, default_closure(wc), kN, guess);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.state.I(), 0.0);
}

TEST(SteadyState, RootMatchesLongIntegration)
{
    for (double p1 : {0.9, 0.1}) {
        for (double tau : {0.5, 2.0}) {
            const auto wc = fig7_classes(p1);
            const auto closure = default_closure(wc);
            const auto ode = long_time_sis_state(wc, {tau, 1.0}, closure, kN, 0.05, 500.0);
            const auto res = solve_sis_endemic(wc, {tau, 1.0}, closure, kN, ode);
            ASSERT_TRUE(res.converged) << res.message;
            EXPECT_NEAR(res.state.I(), ode.I(), 1e-6 * kN);
            EXPECT_LE(res.residual, 1e-10 * kN);
            EXPECT_NEAR(res.state.singles_sum(), kN, 1e-9 * kN);
            for (std::size_t m = 0; m < 2; ++m)
                EXPECT_NEAR(res.state.pair_sum(m), ode.pair_sum(m), 1e-9 * kN);
        }
    }
}

TEST(SteadyState, RootFromRoughGuess)
{
    const auto wc = WeightClasses::random(5, {0.5, 1.5}, {0.5, 0.5});
    const auto closure = default_closure(wc);
    const auto guess = initial_conditions(PairwiseModel::SIS, kN, 0.5, wc);
    const auto res = solve_sis_endemic(wc, {1.0, 1.0}, closure, kN, guess);
    ASSERT_TRUE(res.converged) << res.message;
    const auto ode = long_time_sis_state(wc, {1.0, 1.0}, closure, kN, 0.05, 500.0);
    EXPECT_NEAR(res.state.I() / kN, ode.I() / kN, 1e-6);
    EXPECT_GT(res.state.I() / kN, 0.5);
}

TEST(SteadyState, RejectsSirState)
{
    const auto wc = fig7_classes(0.5);
    const auto guess = initial_conditions(PairwiseModel::SIR, kN, 0.05, wc);
    EXPECT_THROW(solve_sis_endemic(wc, {1.0, 1.0}, default_closure(wc), kN, guess), InvalidArgument);
}

TEST(Sweep, BelowThresholdGivesZero)
{
    // SIS pairwise threshold for equal weights is tau (k - 1) / gamma = 1 at tau = 0.25
    const auto wc = WeightClasses::random(5, {1.0, 1.0}, {0.5, 0.5});
    const std::vector<double> taus{0.05, 0.1, 0.2};
    const auto points = sweep_endemic(wc, taus, 1.0, ClosureKind::Classic, kN);
    for (const auto& p : points) {
        EXPECT_TRUE(p.converged);
        EXPECT_LT(p.i_over_n, 1e-6);
    }
}

TEST(Sweep, PrevalenceRisesWithTau)
{
    std::vector<double> taus;
    for (int i = 1; i <= 60; ++i)
        taus.push_back(i / 20.0);
    const auto points = sweep_endemic(fig7_classes(0.9), taus, 1.0, ClosureKind::Classic, kN);
    ASSERT_EQ(points.size(), taus.size());
    for (std::size_t i = 1; i < points.size(); ++i) {
        ASSERT_TRUE(points[i].converged) << "tau=" << points[i].tau;
        EXPECT_GE(points[i].i_over_n, points[i - 1].i_over_n - 1e-12);
    }
    EXPECT_GT(points.back().i_over_n, 0.5);
}

TEST(Sweep, PrevalenceFallsWithLargeWeightShare)
{
    const std::vector<double> taus{0.5, 1.0, 2.0, 3.0};
    std::vector<std::vector<SweepPoint>> curves;
    for (double p1 : {0.9, 0.5, 0.1})
        curves.push_back(sweep_endemic(fig7_classes(p1), taus, 1.0, ClosureKind::Classic, kN));
    for (std::size_t j = 0; j < taus.size(); ++j) {
        EXPECT_GT(curves[0][j].i_over_n, curves[1][j].i_over_n);
        EXPECT_GT(curves[1][j].i_over_n, curves[2][j].i_over_n);
    }
}

TEST(Sweep, RejectsUnsortedGrid)
{
    const std::vector<double> taus{1.0, 0.5};
    EXPECT_THROW(sweep_endemic(fig7_classes(0.5), taus, 1.0, ClosureKind::Classic, kN), InvalidArgument);
}

TEST(Sweep, CsvHeader)
{
    const std::vector<double> taus{1.0};
    const auto points = sweep_endemic(fig7_classes(0.5), taus, 1.0, ClosureKind::Classic, kN);
    std::ostringstream os;
    write_sweep_csv(os, points);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "tau,p1,I_over_N,residual,converged");
}
