#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "epinet/errors.hpp"
#include "epinet/thresholds.hpp"

using namespace epinet;

namespace {

// Leading eigenvalue of a positive 2x2 matrix by power iteration.
double power_iteration(double a, double b, double c, double d)
{
    double x = 1.0, y = 1.0, lambda = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double nx = a * x + b * y;
        const double ny = c * x + d * y;
        lambda = std::hypot(nx, ny) / std::hypot(x, y);
        x = nx;
        y = ny;
        const double norm = std::hypot(x, y);
        x /= norm;
        y /= norm;
    }
    return lambda;
}

// Largest root of R^2 - (R1 + R2) R - R1 R2 Q = 0 with Q computed directly.
double quadratic_root(double R1, double R2, double Q)
{
    const double s = R1 + R2;
    return 0.5 * (s + std::sqrt(s * s + 4.0 * R1 * R2 * Q));
}

} // namespace

TEST(R0, RandomLayoutWorkedValue)
{
    const double weights[] = {1.4, 0.8};
    const double probs[] = {1.0 / 3.0, 2.0 / 3.0};
    const auto r = r0_random(6, weights, probs, 1.0, 1.0);
    const double oracle = 5.0 * (1.0 / 3.0 * (1.4 / 2.4) + 2.0 / 3.0 * (0.8 / 1.8));
    EXPECT_NEAR(r.value, oracle, 1e-12);
    EXPECT_NEAR(r.value, 2.453704, 1e-6);
    EXPECT_NEAR(r.r1, 1.4 / 2.4, 1e-15);
}

TEST(R0, FixedLayoutWorkedValue)
{
    const auto r = r0_fixed(2, 4, 1.4, 0.8, 1.0, 1.0);
    const double r1 = 1.4 / 2.4, r2 = 0.8 / 1.8;
    EXPECT_NEAR(r.value, power_iteration(1.0 * r1, 2.0 * r1, 4.0 * r2, 3.0 * r2), 1e-9);
    EXPECT_NEAR(r.value, 2.446520, 1e-6);
}

TEST(R0, NoTransmissionGivesZero)
{
    const double weights[] = {3.0, 0.5};
    const double probs[] = {0.25, 0.75};
    EXPECT_EQ(r0_random(5, weights, probs, 0.0, 1.0).value, 0.0);
    EXPECT_EQ(r0_fixed(2, 3, 3.0, 0.5, 0.0, 1.0).value, 0.0);
}

TEST(R0, EqualWeightsCoincide)
{
    for (double tau : {0.1, 1.0, 2.7}) {
        for (int k1 = 1; k1 < 8; ++k1) {
            const double W = 1.3, gamma = 0.9;
            const double expected = 7.0 * tau * W / (tau * W + gamma);
            const double weights[] = {W, W};
            const double probs[] = {k1 / 8.0, 1.0 - k1 / 8.0};
            EXPECT_NEAR(r0_random(8, weights, probs, tau, gamma).value, expected, 1e-12);
            EXPECT_NEAR(r0_fixed(k1, 8 - k1, W, W, tau, gamma).value, expected, 1e-12);
        }
    }
}

TEST(R0, RejectsInvalidInput)
{
    const double weights[] = {1.0, 1.0};
    const double bad_probs[] = {0.5, 0.6};
    const double probs[] = {0.5, 0.5};
    EXPECT_THROW(r0_random(6, weights, bad_probs, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r0_random(1, weights, probs, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r0_random(6, weights, probs, -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r0_fixed(0, 4, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r0_fixed(2, 4, 0.0, 1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r0_fixed(2, 4, 1.0, 1.0, 1.0, 0.0), InvalidArgument);
}

TEST(Theorems, FixedLayoutNeverExceedsRandom)
{
    const auto report = check_theorem1(10000, 1);
    EXPECT_EQ(report.samples, 10000u);
    EXPECT_EQ(report.violations, 0u);
    EXPECT_TRUE(report.passed());
    EXPECT_LE(report.max_excess, 1e-12);
}

TEST(Theorems, EqualWeightsMaximiseR0)
{
    const auto report = check_theorem2(101);
    EXPECT_TRUE(report.random.passed);
    EXPECT_TRUE(report.fixed.passed);
    EXPECT_NEAR(report.random.argmax_w1, 1.0, 1e-12);
    EXPECT_NEAR(report.fixed.argmax_w1, 1.0, 1e-12);
    EXPECT_NEAR(report.expected_max, 2.5, 1e-15);

    Theorem2Setup other;
    other.k = 9;
    other.k1 = 6;
    other.tau = 0.4;
    other.average_weight = 2.0;
    EXPECT_TRUE(check_theorem2(101, other).passed());
    EXPECT_THROW(check_theorem2(2), InvalidArgument);
}

TEST(PairwiseR, EqualWeightsReduce)
{
    for (double p1 : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(r_pairwise_classic(6, p1, 1.0, 1.0, 1.0, 1.0).value, 4.0, 1e-12);
        EXPECT_NEAR(r_pairwise_classic(6, p1, 2.0, 2.0, 0.5, 1.5).value, 0.5 * 2.0 * 4.0 / 1.5, 1e-12);
    }
    EXPECT_NEAR(r_pairwise_modified(3, 3, 1.0, 1.0, 1.0, 1.0).value, 4.0, 1e-12);
}

TEST(PairwiseR, ClassicClosureInstance)
{
    const auto r = r_pairwise_classic(5, 0.2, 5.0, 1.25, 1.0, 1.0);
    EXPECT_NEAR(r.R1, -1.0, 1e-14);
    EXPECT_NEAR(r.R2, 2.75, 1e-14);
    EXPECT_NEAR(r.Q, 3.0 / (-0.2 * 2.2), 1e-12);
    EXPECT_NEAR(4.0 * r.R1 * r.R2 * r.Q, 75.0, 1e-10);
    EXPECT_NEAR(r.value, quadratic_root(r.R1, r.R2, r.Q), 1e-12);
    EXPECT_NEAR(r.value, 5.29265, 1e-5);
}

TEST(PairwiseR, ModifiedClosureInstance)
{
    const auto r = r_pairwise_modified(2, 8, 10.0, 1.25, 0.5, 1.0);
    EXPECT_EQ(r.R1, 0.0);
    EXPECT_NEAR(r.R2, 3.75, 1e-14);
    EXPECT_TRUE(std::isnan(r.Q));
    // 4 R1 R2 (Q - 1) in the limit k1 -> 2 is 4 tau^2 w1 w2 k1 k2 / gamma^2
    EXPECT_NEAR(4.0 * 0.25 * 10.0 * 1.25 * 16.0, 200.0, 1e-12);
    EXPECT_NEAR(r.value, 0.5 * (3.75 + std::sqrt(3.75 * 3.75 + 200.0)), 1e-12);
    EXPECT_NEAR(r.value, 9.190437444, 1e-5);
}

TEST(PairwiseR, ModifiedMatchesDirectFormAwayFromSingularity)
{
    const auto r = r_pairwise_modified(3, 5, 2.0, 0.5, 0.7, 1.2);
    const double Q = 15.0 / (1.0 * 3.0);
    EXPECT_NEAR(r.Q, Q, 1e-14);
    EXPECT_NEAR(r.value, quadratic_root(r.R1, r.R2, Q - 1.0), 1e-12);
}

TEST(PairwiseR, ClassicMatchesDirectFormAwayFromSingularity)
{
    for (double p1 : {0.05, 0.3, 0.65}) {
        const auto r = r_pairwise_classic(7, p1, 3.0, 0.6, 0.8, 1.1);
        ASSERT_FALSE(std::isnan(r.Q));
        EXPECT_NEAR(r.value, quadratic_root(r.R1, r.R2, r.Q), 1e-10 * r.value);
    }
}

TEST(PairwiseR, IncreasesWithTau)
{
    double prev = 0.0;
    for (int i = 1; i <= 30; ++i) {
        const double tau = 0.1 * i;
        const double R = r_pairwise_classic(5, 0.2, 5.0, 1.25, tau, 1.0).value;
        EXPECT_GT(R, prev);
        prev = R;
    }
    EXPECT_EQ(r_pairwise_classic(5, 0.2, 5.0, 1.25, 0.0, 1.0).value, 0.0);
}

TEST(PairwiseR, RejectsInvalidInput)
{
    EXPECT_THROW(r_pairwise_classic(2, 0.5, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r_pairwise_classic(5, 1.5, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r_pairwise_modified(0, 5, 1.0, 1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(r_pairwise_modified(2, 5, 1.0, -1.0, 1.0, 1.0), InvalidArgument);
}

TEST(ThresholdCsv, LineFormat)
{
    const auto r = r_pairwise_modified(2, 8, 10.0, 1.25, 0.5, 1.0);
    const std::string line = threshold_csv_line(r);
    EXPECT_EQ(line.rfind("R_modified,", 0), 0u);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    EXPECT_EQ(kThresholdCsvHeader, "kind,value,r1,r2,R1,R2,Q,lambda1,lambda2");
}
