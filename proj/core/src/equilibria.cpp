#include "epinet/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"

namespace epinet {

std::string_view to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Converged:
        return "converged";
    case SolveStatus::MaxIterations:
        return "max_iterations";
    case SolveStatus::SingularJacobian:
        return "singular_jacobian";
    case SolveStatus::LineSearchFailed:
        return "line_search_failed";
    }
    return "unknown";
}

namespace {

// Reduced coordinates x = ([I], [SI]_1..M, [II]_1..M) on the manifold fixed by
// the population size and the per-class pair totals.
class ReducedSis {
public:
    ReducedSis(const PairwiseSystem& system, double n, std::vector<double> pair_totals)
        : system_(system), n_(n), totals_(std::move(pair_totals)), classes_(totals_.size())
    {
    }

    std::size_t size() const { return 1 + 2 * classes_; }

    Eigen::VectorXd reduce(const PairwiseState& s) const
    {
        Eigen::VectorXd x(size());
        x[0] = s.I();
        for (std::size_t m = 0; m < classes_; ++m) {
            x[1 + m] = s.pair(Pair::SI, m);
            x[1 + classes_ + m] = s.pair(Pair::II, m);
        }
        return x;
    }

    PairwiseState expand(const Eigen::VectorXd& x) const
    {
        PairwiseState s(PairwiseModel::SIS, classes_);
        s.I() = x[0];
        s.S() = n_ - x[0];
        for (std::size_t m = 0; m < classes_; ++m) {
            const double si = x[1 + m];
            const double ii = x[1 + classes_ + m];
            s.pair(Pair::SI, m) = si;
            s.pair(Pair::II, m) = ii;
            s.pair(Pair::SS, m) = totals_[m] - 2.0 * si - ii;
        }
        return s;
    }

    PairwiseState full_rhs(const PairwiseState& s) const
    {
        PairwiseState d(PairwiseModel::SIS, classes_);
        system_(0.0, s.values(), d.values());
        return d;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const
    {
        const PairwiseState d = full_rhs(expand(x));
        return reduce(d);
    }

    bool physical(const Eigen::VectorXd& x) const
    {
        const double slack = -1e-9 * n_;
        const PairwiseState s = expand(x);
        for (double v : s.values())
            if (v < slack)
                return false;
        return s.I() <= n_ - slack;
    }

    static double inf_norm(const PairwiseState& d)
    {
        double r = 0.0;
        for (double v : d.values())
            r = std::max(r, std::abs(v));
        return r;
    }

private:
    const PairwiseSystem& system_;
    double n_;
    std::vector<double> totals_;
    std::size_t classes_;
};

} // namespace

SteadyStateResult solve_sis_endemic(const WeightClasses& wc, EpidemicParams params, const Closure& closure, double n,
                                    const PairwiseState& initial_guess, const SteadyStateOptions& options)
{
    if (!(n > 0.0))
        throw InvalidArgument("steady state: population size must be positive");
    if (initial_guess.model() != PairwiseModel::SIS || initial_guess.classes() != wc.size())
        throw InvalidArgument("steady state: guess must be an SIS state over the same weight classes");
    for (double v : initial_guess.values())
        if (v < -1e-9 * n || !std::isfinite(v))
            throw InvalidArgument("steady state: guess is not a physical state");

    const PairwiseSystem system(PairwiseModel::SIS, wc, params, closure);
    std::vector<double> totals(wc.size());
    for (std::size_t m = 0; m < wc.size(); ++m)
        totals[m] = initial_guess.pair_sum(m);
    const ReducedSis reduced(system, n, totals);
    const double target = options.tolerance * n;

    Eigen::VectorXd x = reduced.reduce(initial_guess);
    SteadyStateResult result;
    const auto finish = [&](SolveStatus status, std::string message) {
        result.state = reduced.expand(x);
        result.residual = ReducedSis::inf_norm(reduced.full_rhs(result.state));
        result.status = status;
        result.converged = status == SolveStatus::Converged;
        result.message = std::move(message);
        return result;
    };

    Eigen::VectorXd f = reduced.residual(x);
    const std::size_t dim = reduced.size();
    for (int iter = 0;; ++iter) {
        result.iterations = iter;
        if (ReducedSis::inf_norm(reduced.full_rhs(reduced.expand(x))) <= target)
            return finish(SolveStatus::Converged, "converged");
        if (iter >= options.max_iterations)
            return finish(SolveStatus::MaxIterations, "no convergence after " + std::to_string(iter) +
                                                          " iterations; residual " +
                                                          csv_number(ReducedSis::inf_norm(
                                                              reduced.full_rhs(reduced.expand(x)))));

        Eigen::MatrixXd jac(dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(static_cast<Eigen::Index>(j)) = (reduced.residual(xp) - reduced.residual(xm)) / (2.0 * h);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible())
            return finish(SolveStatus::SingularJacobian, "singular Jacobian at iteration " + std::to_string(iter));
        const Eigen::VectorXd delta = lu.solve(-f);

        const double norm0 = f.norm();
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= options.max_halvings; ++halving, alpha *= 0.5) {
            const Eigen::VectorXd trial = x + alpha * delta;
            if (!reduced.physical(trial))
                continue;
            const Eigen::VectorXd ft = reduced.residual(trial);
            if (ft.norm() < (1.0 - 1e-4 * alpha) * norm0 || ft.norm() == 0.0) {
                x = trial;
                f = ft;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            return finish(SolveStatus::LineSearchFailed,
                          "line search failed at iteration " + std::to_string(iter) + "; residual " +
                              csv_number(ReducedSis::inf_norm(reduced.full_rhs(reduced.expand(x)))));
    }
}

PairwiseState long_time_sis_state(const WeightClasses& wc, EpidemicParams params, const Closure& closure, double n,
                                  double initial_fraction, double horizon)
{
    const PairwiseSystem system(PairwiseModel::SIS, wc, params, closure);
    const PairwiseState init = initial_conditions(PairwiseModel::SIS, n, initial_fraction, wc);
    IntegratorOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-10;
    return integrate_pairwise(system, init, horizon, opt).final_state();
}

std::vector<SweepPoint> sweep_endemic(const WeightClasses& wc, std::span<const double> taus, double gamma,
                                      ClosureKind closure_kind, double n, const SweepOptions& options)
{
    if (!std::is_sorted(taus.begin(), taus.end()))
        throw InvalidArgument("steady sweep: tau grid must be ascending");
    const Closure closure = make_closure(closure_kind, wc);

    std::vector<SweepPoint> points;
    points.reserve(taus.size());
    PairwiseState previous;
    bool have_previous = false;
    for (double tau : taus) {
        SweepPoint point;
        point.tau = tau;
        point.p1 = wc.class_fraction(0);
        const EpidemicParams params{tau, gamma};
        try {
            const auto from_ode = [&] {
                return long_time_sis_state(wc, params, closure, n, options.initial_fraction,
                                           options.ode_horizon_gamma_units / gamma);
            };
            SteadyStateResult root = solve_sis_endemic(wc, params, closure, n, have_previous ? previous : from_ode(),
                                                       options.newton);
            // a continuation step can overshoot near the bifurcation or fall onto the
            // disease-free branch; retry from the integrated state
            if (have_previous && (!root.converged || root.state.I() <= 1e-9 * n))
                root = solve_sis_endemic(wc, params, closure, n, from_ode(), options.newton);
            // round-off can leave the disease-free root marginally negative
            point.i_over_n = std::max(0.0, root.state.I() / n);
            point.residual = root.residual;
            point.converged = root.converged;
            point.status = root.status;
            have_previous = root.converged && root.state.I() > 1e-9 * n;
            if (have_previous)
                previous = root.state;
        } catch (const std::exception&) {
            point.converged = false;
            point.i_over_n = std::numeric_limits<double>::quiet_NaN();
            point.residual = std::numeric_limits<double>::quiet_NaN();
            have_previous = false;
        }
        points.push_back(point);
    }
    return points;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points, bool header)
{
    if (header)
        os << "tau,p1,I_over_N,residual,converged\n";
    for (const auto& p : points)
        os << csv_number(p.tau) << ',' << csv_number(p.p1) << ',' << csv_number(p.i_over_n) << ','
           << csv_number(p.residual) << ',' << (p.converged ? 1 : 0) << '\n';
}

} // namespace epinet
