#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace epinet {

enum class ThresholdKind { R0Random, R0Fixed, RClassic, RModified };

std::string_view to_string(ThresholdKind kind);

/// A threshold value plus the intermediates it was built from. Entries that
/// do not apply to a kind (or are undefined, e.g. Q at its singularity) are NaN.
struct ThresholdReport {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    ThresholdKind kind = ThresholdKind::R0Random;
    double value = 0.0;
    double r1 = nan;  ///< transmission probability across a class-1 link
    double r2 = nan;
    double R1 = nan;
    double R2 = nan;
    double Q = nan;
    double lambda1 = nan;  ///< early quasi-equilibrium [SI]_1 / [I]
    double lambda2 = nan;
};

/// Probability that an infected node transmits across a link of weight w
/// before recovering: tau w / (tau w + gamma).
double transmission_probability(double w, double tau, double gamma);

/// Network-perspective R0 for randomly assigned weights:
/// (k - 1) * sum_i p_i r_i over any number of classes.
ThresholdReport r0_random(int k, std::span<const double> weights, std::span<const double> probs, double tau,
                          double gamma);

/// Network-perspective R0 for the fixed layout (k1 links of w1, k2 of w2):
/// leading eigenvalue of [[(k1-1) r1, k1 r1], [k2 r2, (k2-1) r2]].
ThresholdReport r0_fixed(int k1, int k2, double w1, double w2, double tau, double gamma);

/// Pairwise threshold R under the classic closure (two weight classes).
/// The discriminant term 4 R1 R2 Q is evaluated as 4 tau^2 w1 w2 (k-2) / gamma^2,
/// which stays finite where Q itself is singular.
ThresholdReport r_pairwise_classic(int k, double p1, double w1, double w2, double tau, double gamma);

/// Pairwise threshold R under the modified closure. 4 R1 R2 (Q - 1) is
/// evaluated as 4 (tau^2 w1 w2 k1 k2 / gamma^2 - R1 R2), finite at k_i = 2.
ThresholdReport r_pairwise_modified(int k1, int k2, double w1, double w2, double tau, double gamma);

/// Single CSV line `kind,value,r1,r2,R1,R2,Q,lambda1,lambda2`.
std::string threshold_csv_line(const ThresholdReport& report);
inline constexpr std::string_view kThresholdCsvHeader = "kind,value,r1,r2,R1,R2,Q,lambda1,lambda2";

struct Theorem1Report {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_excess = -std::numeric_limits<double>::infinity();  ///< max of R0_fixed - R0_random
    bool passed() const { return samples > 0 && violations == 0; }
};

/// Draws k in [2, 20], 1 <= k1 <= k-1, w_i in (0, 10], tau, gamma in (0.01, 5]
/// and checks r0_fixed <= r0_random(p1 = k1/k) + 1e-12 for every draw.
Theorem1Report check_theorem1(std::size_t sample_count, std::uint64_t seed);

struct Theorem2Setup {
    int k = 6;
    int k1 = 2;           ///< fixed layout; p1 = k1 / k for both layouts
    double average_weight = 1.0;
    double tau = 1.0;
    double gamma = 1.0;
};

struct Theorem2Curve {
    double argmax_w1 = 0.0;
    double max_value = 0.0;
    bool passed = false;
};

struct Theorem2Report {
    std::size_t grid_points = 0;
    double expected_argmax = 0.0;  ///< grid point nearest to w1 = W
    double expected_max = 0.0;     ///< (k-1) tau W / (tau W + gamma)
    double resolution = 0.0;       ///< tolerance on the maximum implied by the grid spacing
    Theorem2Curve random;
    Theorem2Curve fixed;
    bool passed() const { return random.passed && fixed.passed; }
};

/// Sweeps w1 over a uniform grid centred on W with w2 fixed by
/// p1 w1 + p2 w2 = W and checks both R0 curves peak at w1 = W with value
/// (k-1) tau W / (tau W + gamma).
Theorem2Report check_theorem2(std::size_t grid_points, const Theorem2Setup& setup = {});

} // namespace epinet
