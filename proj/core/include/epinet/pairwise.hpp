#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "epinet/gillespie.hpp"
#include "epinet/integrator.hpp"
#include "epinet/weights.hpp"

namespace epinet {

enum class PairwiseModel { SIS, SIR };

/// Pair families. SR, IR and RR stay zero for SIS.
enum class Pair { SS = 0, SI, II, SR, IR, RR };

/// Expected singles [S], [I], [R] and per-class doubly counted pairs [AB]_m.
///
/// Storage is a flat vector [S, I, R, SS_1..SS_M, SI_1.., II_1.., SR_1..,
/// IR_1.., RR_1..], so a state can be handed to the integrator directly.
class PairwiseState {
public:
    PairwiseState() = default;
    PairwiseState(PairwiseModel model, std::size_t classes);
    PairwiseState(PairwiseModel model, std::size_t classes, std::span<const double> values);

    PairwiseModel model() const noexcept { return model_; }
    std::size_t classes() const noexcept { return classes_; }

    double& S() { return values_[0]; }
    double& I() { return values_[1]; }
    double& R() { return values_[2]; }
    double S() const { return values_[0]; }
    double I() const { return values_[1]; }
    double R() const { return values_[2]; }

    double& pair(Pair p, std::size_t m) { return values_[offset(p, m)]; }
    double pair(Pair p, std::size_t m) const { return values_[offset(p, m)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    /// [S] + [I] + [R].
    double singles_sum() const;
    /// [SS]_m + 2[SI]_m + [II]_m + 2[SR]_m + 2[IR]_m + [RR]_m = 2 * (class-m edges).
    double pair_sum(std::size_t m) const;

    /// Classes summed into a single-class state.
    PairwiseState aggregated() const;

    static std::size_t dimension(std::size_t classes) { return 3 + 6 * classes; }

private:
    std::size_t offset(Pair p, std::size_t m) const { return 3 + static_cast<std::size_t>(p) * classes_ + m; }

    PairwiseModel model_ = PairwiseModel::SIS;
    std::size_t classes_ = 0;
    std::vector<double> values_;
};

enum class ClosureKind { Classic, Modified };

/// Triple approximation [ABC]_mn from pairs and singles.
///
/// Classic:  ((k-1)/k) [AB]_m [BC]_n / [B] for every (m, n).
/// Modified: ((k_i-1)/k_i) [AB]_i [BC]_i / [B] for m = n = i and
///           [AB]_m [BC]_n / [B] across classes.
struct Closure {
    ClosureKind kind = ClosureKind::Classic;
    double degree = 0.0;
    std::vector<double> class_degrees;

    static Closure classic(double k);
    static Closure modified(std::vector<double> class_degrees);

    /// Unchecked evaluation; inputs must be non-negative. Returns 0 when b == 0.
    double triple(double ab_m, double bc_n, double b, std::size_t m, std::size_t n) const
    {
        if (b <= 0.0)
            return 0.0;
        const double base = ab_m * bc_n / b;
        if (kind == ClosureKind::Classic)
            return (degree - 1.0) / degree * base;
        if (m == n)
            return (class_degrees[m] - 1.0) / class_degrees[m] * base;
        return base;
    }
};

/// Checked closure evaluation; throws InvalidArgument on negative inputs.
double closure_eval(const Closure& closure, double ab_m, double bc_n, double b, std::size_t m, std::size_t n);

/// Classic with k = wc.degree, or Modified with k_i = wc.class_fraction(i) * k.
Closure make_closure(ClosureKind kind, const WeightClasses& wc);
/// Classic for random weight layouts, Modified for fixed ones.
Closure default_closure(const WeightClasses& wc);

/// Right-hand side of the weighted pairwise SIS or SIR system, usable as an
/// OdeRhs. Triple arguments are clamped at zero before closing.
class PairwiseSystem {
public:
    PairwiseSystem(PairwiseModel model, std::vector<double> weights, EpidemicParams params, Closure closure);
    PairwiseSystem(PairwiseModel model, const WeightClasses& wc, EpidemicParams params, Closure closure);

    void operator()(double t, std::span<const double> y, std::span<double> dydt) const;

    PairwiseModel model() const noexcept { return model_; }
    std::size_t classes() const noexcept { return weights_.size(); }
    std::size_t dimension() const noexcept { return PairwiseState::dimension(classes()); }
    const EpidemicParams& params() const noexcept { return params_; }

private:
    PairwiseModel model_;
    std::vector<double> weights_;
    EpidemicParams params_;
    Closure closure_;
};

PairwiseState sis_rhs(const PairwiseState& state, const WeightClasses& wc, EpidemicParams params,
                      const Closure& closure);
PairwiseState sir_rhs(const PairwiseState& state, const WeightClasses& wc, EpidemicParams params,
                      const Closure& closure);

/// Classic unweighted pairwise model on an aggregated (single-class) state,
/// with every link carrying the same weight (transmission tau * weight).
class UnweightedReferenceSystem {
public:
    UnweightedReferenceSystem(PairwiseModel model, double degree, EpidemicParams params, double weight = 1.0);
    void operator()(double t, std::span<const double> y, std::span<double> dydt) const;

private:
    PairwiseModel model_;
    double degree_;
    EpidemicParams params_;
    double weight_;
};

PairwiseState unweighted_reference_rhs(const PairwiseState& state, double k, EpidemicParams params,
                                       double weight = 1.0);

/// S = (1-f)N, I = fN and pairs at random mixing:
/// [AB]_m = q_m k N (A/N)(B/N) with q_m = p_m (random) or k_m/k (fixed).
PairwiseState initial_conditions(PairwiseModel model, double n, double initial_fraction, const WeightClasses& wc);

struct PairwiseSolution {
    PairwiseModel model = PairwiseModel::SIS;
    std::size_t classes = 0;
    OdeSolution ode;

    PairwiseState at(double t) const;
    PairwiseState final_state() const;
};

PairwiseSolution integrate_pairwise(const PairwiseSystem& system, const PairwiseState& initial, double t_end,
                                    const IntegratorOptions& options = {});

/// `# M=<m> weights=<w1,...>` line, then
/// `time,S,I,R,SS_1..SS_M,SI_1..SI_M,II_1..II_M[,SR_m..,IR_m..,RR_m..]`
/// sampled on the grid (the R-pair columns only for SIR).
void write_pairwise_csv(std::ostream& os, const PairwiseSolution& solution, std::span<const double> grid,
                        std::span<const double> weights);

} // namespace epinet
