#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "epinet/errors.hpp"
#include "epinet/rng.hpp"
#include "epinet/weights.hpp"
#include "stats.hpp"

using namespace epinet;

TEST(Rng, SplitmixMatchesReferenceOutput)
{
    // first output of the reference splitmix64 generator started from state 0
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, StreamsAreReproducibleAndDistinct)
{
    Rng a = make_stream(42, 3);
    Rng b = make_stream(42, 3);
    Rng c = make_stream(42, 4);
    Rng d = make_stream(43, 3);
    for (int i = 0; i < 100; ++i) {
        const auto va = a();
        EXPECT_EQ(va, b());
        EXPECT_NE(va, c());
        EXPECT_NE(va, d());
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_EQ(derive_seed(9, 5), derive_seed(9, 5));
}

TEST(Rng, Uniform01StaysInUnitInterval)
{
    Rng rng = make_stream(1, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(rng);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, UniformIndexIsUnbiased)
{
    Rng rng = make_stream(2, 0);
    const int bins = 7;
    std::vector<double> counts(bins, 0.0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto j = uniform_index(rng, bins);
        ASSERT_LT(j, static_cast<std::uint64_t>(bins));
        counts[j] += 1.0;
    }
    EXPECT_GT(testing_stats::chi_square_p_value(counts, std::vector<double>(bins, n / double(bins))), 0.01);
    EXPECT_EQ(uniform_index(rng, 1), 0u);
}

TEST(Rng, ExponentialPassesKolmogorovSmirnov)
{
    Rng rng = make_stream(3, 0);
    const double rate = 2.5;
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) {
        const double x = exponential(rng, rate);
        ASSERT_GT(x, 0.0);
        ASSERT_TRUE(std::isfinite(x));
        xs.push_back(x);
    }
    EXPECT_GT(testing_stats::ks_p_value(xs, [rate](double x) { return 1.0 - std::exp(-rate * x); }), 0.01);
}

TEST(Rng, ShuffleIsAPermutation)
{
    Rng rng = make_stream(4, 0);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i)
        v[i] = i;
    shuffle(std::span<int>(v), rng);
    EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
}

TEST(WeightClasses, AverageWeightOfRandomLayout)
{
    const auto wc = WeightClasses::random(5, {5.0, 1.25}, {0.2, 0.8});
    EXPECT_DOUBLE_EQ(wc.average_weight(), 2.0);
    EXPECT_DOUBLE_EQ(wc.class_fraction(1), 0.8);
}

TEST(WeightClasses, AverageWeightOfFixedLayout)
{
    const auto wc = WeightClasses::fixed({1.4, 0.8}, {2, 4});
    EXPECT_EQ(wc.degree, 6);
    EXPECT_NEAR(wc.average_weight(), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(wc.class_fraction(0), 1.0 / 3.0);
}

TEST(WeightClasses, RejectsBrokenInvariants)
{
    EXPECT_THROW(WeightClasses::random(5, {1.0, 2.0}, {0.5, 0.6}), InvalidArgument);
    EXPECT_THROW(WeightClasses::random(5, {1.0, -2.0}, {0.5, 0.5}), InvalidArgument);
    EXPECT_THROW(WeightClasses::random(5, {1.0, 2.0}, {1.0}), InvalidArgument);
    EXPECT_THROW(WeightClasses::random(0, {1.0}, {1.0}), InvalidArgument);
    EXPECT_THROW(WeightClasses::random(5, {}, {}), InvalidArgument);
    EXPECT_THROW(WeightClasses::fixed({1.0, 2.0}, {3}), InvalidArgument);
    EXPECT_THROW(WeightClasses::fixed({1.0}, {0}), InvalidArgument);
    EXPECT_THROW(WeightClasses{}.class_fraction(0), InvalidArgument);
    // sums within 1e-12 of one are accepted
    EXPECT_NO_THROW(WeightClasses::random(5, {1.0, 2.0, 3.0}, {0.1, 0.2, 0.7}));
}

TEST(WeightClasses, ModeNamesRoundTrip)
{
    EXPECT_EQ(weight_mode_from_string(to_string(WeightMode::Random)), WeightMode::Random);
    EXPECT_EQ(weight_mode_from_string(to_string(WeightMode::Fixed)), WeightMode::Fixed);
    EXPECT_THROW(weight_mode_from_string("uniform"), InvalidArgument);
}
