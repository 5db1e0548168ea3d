#include "epinet/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"
#include "epinet/rng.hpp"

namespace epinet {

std::string_view to_string(ThresholdKind kind)
{
    switch (kind) {
    case ThresholdKind::R0Random:
        return "R0_random";
    case ThresholdKind::R0Fixed:
        return "R0_fixed";
    case ThresholdKind::RClassic:
        return "R_classic";
    case ThresholdKind::RModified:
        return "R_modified";
    }
    return "unknown";
}

namespace {

void check_rates(double tau, double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("threshold: gamma must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw InvalidArgument("threshold: tau must be non-negative");
}

void check_weight(double w)
{
    if (!(w > 0.0) || !std::isfinite(w))
        throw InvalidArgument("threshold: weights must be positive");
}

// Largest root of R^2 - (R1 + R2) R - c = 0, with c the cancelled product term.
double leading_root(double sum, double c)
{
    return 0.5 * (sum + std::sqrt(std::max(0.0, sum * sum + 4.0 * c)));
}

double safe_ratio(double num, double den)
{
    return den != 0.0 ? num / den : 0.0;
}

} // namespace

double transmission_probability(double w, double tau, double gamma)
{
    const double rate = tau * w;
    return rate / (rate + gamma);
}

ThresholdReport r0_random(int k, std::span<const double> weights, std::span<const double> probs, double tau,
                          double gamma)
{
    check_rates(tau, gamma);
    if (k < 2)
        throw InvalidArgument("R0 (random weights): need k >= 2");
    if (weights.empty() || weights.size() != probs.size())
        throw InvalidArgument("R0 (random weights): weights and probabilities must have equal, non-zero length");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidArgument("R0 (random weights): probabilities must lie in [0, 1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument("R0 (random weights): probabilities must sum to 1");

    ThresholdReport report;
    report.kind = ThresholdKind::R0Random;
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        check_weight(weights[i]);
        sum += probs[i] * transmission_probability(weights[i], tau, gamma);
    }
    report.value = (k - 1) * sum;
    report.r1 = transmission_probability(weights[0], tau, gamma);
    if (weights.size() > 1)
        report.r2 = transmission_probability(weights[1], tau, gamma);
    return report;
}

ThresholdReport r0_fixed(int k1, int k2, double w1, double w2, double tau, double gamma)
{
    check_rates(tau, gamma);
    check_weight(w1);
    check_weight(w2);
    if (k1 < 1 || k2 < 1)
        throw InvalidArgument("R0 (fixed weights): need k1, k2 >= 1");

    ThresholdReport report;
    report.kind = ThresholdKind::R0Fixed;
    report.r1 = transmission_probability(w1, tau, gamma);
    report.r2 = transmission_probability(w2, tau, gamma);
    const double a = (k1 - 1) * report.r1;
    const double d = (k2 - 1) * report.r2;
    const double diff = a - d;
    report.value = 0.5 * (a + d + std::sqrt(diff * diff + 4.0 * k1 * k2 * report.r1 * report.r2));
    return report;
}

ThresholdReport r_pairwise_classic(int k, double p1, double w1, double w2, double tau, double gamma)
{
    check_rates(tau, gamma);
    check_weight(w1);
    check_weight(w2);
    if (k <= 2)
        throw InvalidArgument("pairwise R (classic closure): need k >= 3");
    if (!(p1 >= 0.0 && p1 <= 1.0))
        throw InvalidArgument("pairwise R (classic closure): p1 must lie in [0, 1]");

    const double p2 = 1.0 - p1;
    const double km1 = k - 1.0;
    const double f1 = km1 * p1 - 1.0;
    const double f2 = km1 * p2 - 1.0;

    ThresholdReport report;
    report.kind = ThresholdKind::RClassic;
    report.R1 = tau * w1 * f1 / gamma;
    report.R2 = tau * w2 * f2 / gamma;
    if (f1 != 0.0 && f2 != 0.0)
        report.Q = (k - 2.0) / (f1 * f2);
    const double product = tau * tau * w1 * w2 * (k - 2.0) / (gamma * gamma);  // R1 R2 Q
    const double R = leading_root(report.R1 + report.R2, product);
    report.value = R;
    report.lambda1 = safe_ratio(gamma * km1 * p1 * R, tau * w1 + gamma * R);
    report.lambda2 = safe_ratio(gamma * km1 * p2 * R, tau * w2 + gamma * R);
    return report;
}

ThresholdReport r_pairwise_modified(int k1, int k2, double w1, double w2, double tau, double gamma)
{
    check_rates(tau, gamma);
    check_weight(w1);
    check_weight(w2);
    if (k1 < 1 || k2 < 1)
        throw InvalidArgument("pairwise R (modified closure): need k1, k2 >= 1");

    ThresholdReport report;
    report.kind = ThresholdKind::RModified;
    report.R1 = tau * w1 * (k1 - 2.0) / gamma;
    report.R2 = tau * w2 * (k2 - 2.0) / gamma;
    if (k1 != 2 && k2 != 2)
        report.Q = static_cast<double>(k1) * k2 / ((k1 - 2.0) * (k2 - 2.0));
    const double product = tau * tau * w1 * w2 * k1 * k2 / (gamma * gamma);  // R1 R2 Q
    const double R = leading_root(report.R1 + report.R2, product - report.R1 * report.R2);
    report.value = R;
    report.lambda1 = safe_ratio(gamma * k1 * R, 2.0 * tau * w1 + gamma * R);
    report.lambda2 = safe_ratio(gamma * k2 * R, 2.0 * tau * w2 + gamma * R);
    return report;
}

std::string threshold_csv_line(const ThresholdReport& r)
{
    std::ostringstream os;
    os << to_string(r.kind) << ',' << csv_number(r.value) << ',' << csv_number(r.r1) << ',' << csv_number(r.r2)
       << ',' << csv_number(r.R1) << ',' << csv_number(r.R2) << ',' << csv_number(r.Q) << ','
       << csv_number(r.lambda1) << ',' << csv_number(r.lambda2);
    return os.str();
}

Theorem1Report check_theorem1(std::size_t sample_count, std::uint64_t seed)
{
    if (sample_count == 0)
        throw InvalidArgument("theorem 1 check: need at least one sample");
    Rng rng = make_stream(seed, 0);
    // (lo, hi] by reflecting the [0, 1) draw
    const auto half_open = [&rng](double lo, double hi) { return hi - (hi - lo) * uniform01(rng); };

    Theorem1Report report;
    for (std::size_t s = 0; s < sample_count; ++s) {
        const int k = 2 + static_cast<int>(uniform_index(rng, 19));
        const int k1 = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(k - 1)));
        const double w1 = half_open(0.0, 10.0);
        const double w2 = half_open(0.0, 10.0);
        const double tau = half_open(0.01, 5.0);
        const double gamma = half_open(0.01, 5.0);

        const double p1 = static_cast<double>(k1) / k;
        const double weights[] = {w1, w2};
        const double probs[] = {p1, 1.0 - p1};
        const double fixed = r0_fixed(k1, k - k1, w1, w2, tau, gamma).value;
        const double random = r0_random(k, weights, probs, tau, gamma).value;
        const double excess = fixed - random;
        report.max_excess = std::max(report.max_excess, excess);
        if (excess > 1e-12)
            ++report.violations;
        ++report.samples;
    }
    return report;
}

Theorem2Report check_theorem2(std::size_t grid_points, const Theorem2Setup& setup)
{
    if (grid_points < 3)
        throw InvalidArgument("theorem 2 check: need at least three grid points");
    if (setup.k1 < 1 || setup.k1 >= setup.k)
        throw InvalidArgument("theorem 2 check: need 1 <= k1 <= k-1");
    check_rates(setup.tau, setup.gamma);
    const double W = setup.average_weight;
    check_weight(W);

    const int k2 = setup.k - setup.k1;
    const double p1 = static_cast<double>(setup.k1) / setup.k;
    const double p2 = 1.0 - p1;
    // w1 in [W - d, W + d] keeping w2 = (W - p1 w1) / p2 non-negative
    const double d = std::min(W, W * p2 / p1);
    const double lo = W - d;
    const double step = 2.0 * d / static_cast<double>(grid_points - 1);

    Theorem2Report report;
    report.grid_points = grid_points;
    report.expected_max = (setup.k - 1) * transmission_probability(W, setup.tau, setup.gamma);
    const std::size_t nearest = static_cast<std::size_t>(std::llround((W - lo) / step));
    report.expected_argmax = lo + step * static_cast<double>(nearest);

    std::size_t best_random = 0, best_fixed = 0;
    double max_random = -1.0, max_fixed = -1.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double w1 = lo + step * static_cast<double>(i);
        const double w2 = std::max(0.0, (W - p1 * w1) / p2);
        // r(w) is continuous at w = 0, where no transmission happens
        const double r1 = transmission_probability(w1, setup.tau, setup.gamma);
        const double r2 = transmission_probability(w2, setup.tau, setup.gamma);
        const double random = (setup.k - 1) * (p1 * r1 + p2 * r2);
        const double a = (setup.k1 - 1) * r1;
        const double b = (k2 - 1) * r2;
        const double fixed = 0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * setup.k1 * k2 * r1 * r2));
        if (random > max_random) {
            max_random = random;
            best_random = i;
        }
        if (fixed > max_fixed) {
            max_fixed = fixed;
            best_fixed = i;
        }
    }

    // An off-grid optimum is only resolvable to the first-order change of R0 across one grid cell.
    const double dr = setup.tau * setup.gamma / std::pow(setup.tau * W + setup.gamma, 2);
    report.resolution = std::abs(static_cast<double>(nearest) * step - (W - lo)) <= 1e-12 * W ? 1e-12 : (setup.k - 1) * dr * step;

    const auto finish = [&](std::size_t best, double value) {
        Theorem2Curve c;
        c.argmax_w1 = lo + step * static_cast<double>(best);
        c.max_value = value;
        c.passed = best == nearest && std::abs(value - report.expected_max) <= report.resolution;
        return c;
    };
    report.random = finish(best_random, max_random);
    report.fixed = finish(best_fixed, max_fixed);
    return report;
}

} // namespace epinet
