#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace testing_stats {

// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
inline double ks_p_value(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j)
        sum += 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    return std::clamp(sum, 0.0, 1.0);
}

// Pearson chi-square p-value; adjacent bins are merged until every expected count is >= 5.
inline double chi_square_p_value(const std::vector<double>& observed, const std::vector<double>& expected)
{
    std::vector<double> obs, exp;
    double o = 0.0, e = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        o += observed[i];
        e += expected[i];
        if (e >= 5.0) {
            obs.push_back(o);
            exp.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0) {
        obs.back() += o;
        exp.back() += e;
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i)
        stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    const boost::math::chi_squared dist(static_cast<double>(obs.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

inline double binomial_pmf(int n, int k, double p)
{
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(p, k) *
           std::pow(1.0 - p, n - k);
}

} // namespace testing_stats
