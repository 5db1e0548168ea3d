#include "epinet/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"

namespace epinet {

PairwiseState::PairwiseState(PairwiseModel model, std::size_t classes)
    : model_(model), classes_(classes), values_(dimension(classes), 0.0)
{
    if (classes == 0)
        throw InvalidArgument("pairwise state: at least one weight class is required");
}

PairwiseState::PairwiseState(PairwiseModel model, std::size_t classes, std::span<const double> values)
    : PairwiseState(model, classes)
{
    if (values.size() != values_.size())
        throw InvalidArgument("pairwise state: value vector has the wrong dimension");
    std::copy(values.begin(), values.end(), values_.begin());
}

double PairwiseState::singles_sum() const
{
    return S() + I() + R();
}

double PairwiseState::pair_sum(std::size_t m) const
{
    return pair(Pair::SS, m) + 2.0 * pair(Pair::SI, m) + pair(Pair::II, m) + 2.0 * pair(Pair::SR, m) +
           2.0 * pair(Pair::IR, m) + pair(Pair::RR, m);
}

PairwiseState PairwiseState::aggregated() const
{
    PairwiseState out(model_, 1);
    out.S() = S();
    out.I() = I();
    out.R() = R();
    for (int p = 0; p < 6; ++p)
        for (std::size_t m = 0; m < classes_; ++m)
            out.pair(static_cast<Pair>(p), 0) += pair(static_cast<Pair>(p), m);
    return out;
}

Closure Closure::classic(double k)
{
    if (!(k >= 1.0))
        throw InvalidArgument("classic closure: degree must be >= 1");
    Closure c;
    c.kind = ClosureKind::Classic;
    c.degree = k;
    return c;
}

Closure Closure::modified(std::vector<double> class_degrees)
{
    if (class_degrees.empty())
        throw InvalidArgument("modified closure: per-class degrees required");
    for (double k : class_degrees)
        if (!(k >= 1.0))
            throw InvalidArgument("modified closure: every per-class degree must be >= 1");
    Closure c;
    c.kind = ClosureKind::Modified;
    c.class_degrees = std::move(class_degrees);
    for (double k : c.class_degrees)
        c.degree += k;
    return c;
}

double closure_eval(const Closure& closure, double ab_m, double bc_n, double b, std::size_t m, std::size_t n)
{
    if (ab_m < 0.0 || bc_n < 0.0 || b < 0.0)
        throw InvalidArgument("closure: pair and single counts must be non-negative");
    if (closure.kind == ClosureKind::Modified && (m >= closure.class_degrees.size() || n >= closure.class_degrees.size()))
        throw InvalidArgument("closure: class index out of range");
    return closure.triple(ab_m, bc_n, b, m, n);
}

Closure make_closure(ClosureKind kind, const WeightClasses& wc)
{
    wc.validate();
    if (kind == ClosureKind::Classic)
        return Closure::classic(static_cast<double>(wc.degree));
    std::vector<double> ks(wc.size());
    for (std::size_t m = 0; m < wc.size(); ++m)
        ks[m] = wc.class_fraction(m) * static_cast<double>(wc.degree);
    return Closure::modified(std::move(ks));
}

Closure default_closure(const WeightClasses& wc)
{
    return make_closure(wc.mode == WeightMode::Fixed ? ClosureKind::Modified : ClosureKind::Classic, wc);
}

PairwiseSystem::PairwiseSystem(PairwiseModel model, std::vector<double> weights, EpidemicParams params,
                               Closure closure)
    : model_(model), weights_(std::move(weights)), params_(params), closure_(std::move(closure))
{
    params_.validate();
    if (weights_.empty())
        throw InvalidArgument("pairwise system: at least one weight class is required");
    if (closure_.kind == ClosureKind::Modified && closure_.class_degrees.size() != weights_.size())
        throw InvalidArgument("pairwise system: modified closure needs one degree per weight class");
}

PairwiseSystem::PairwiseSystem(PairwiseModel model, const WeightClasses& wc, EpidemicParams params, Closure closure)
    : PairwiseSystem(model, wc.weights, params, std::move(closure))
{
}

void PairwiseSystem::operator()(double, std::span<const double> y, std::span<double> dydt) const
{
    const std::size_t M = weights_.size();
    const double tau = params_.tau;
    const double gamma = params_.gamma;
    const auto pos = [](double x) { return x > 0.0 ? x : 0.0; };

    const double S = y[0];
    const double I = y[1];
    const double Sc = pos(S);
    const double* SS = y.data() + 3;
    const double* SI = SS + M;
    const double* II = SI + M;
    const double* SR = II + M;
    const double* IR = SR + M;

    double* dSS = dydt.data() + 3;
    double* dSI = dSS + M;
    double* dII = dSI + M;
    double* dSR = dII + M;
    double* dIR = dSR + M;
    double* dRR = dIR + M;

    double force = 0.0;
    for (std::size_t n = 0; n < M; ++n)
        force += weights_[n] * SI[n];

    const bool sir = model_ == PairwiseModel::SIR;
    if (sir) {
        dydt[0] = -tau * force;
        dydt[1] = tau * force - gamma * I;
        dydt[2] = gamma * I;
    } else {
        dydt[0] = gamma * I - tau * force;
        dydt[1] = -dydt[0];
        dydt[2] = 0.0;
    }

    for (std::size_t m = 0; m < M; ++m) {
        // sum_n w_n [SSI]_mn, sum_n w_n [ISI]_nm, sum_n w_n [ISR]_nm
        double ssi = 0.0;
        double isi = 0.0;
        double isr = 0.0;
        for (std::size_t n = 0; n < M; ++n) {
            ssi += weights_[n] * closure_.triple(pos(SS[m]), pos(SI[n]), Sc, m, n);
            isi += weights_[n] * closure_.triple(pos(SI[n]), pos(SI[m]), Sc, n, m);
            if (sir)
                isr += weights_[n] * closure_.triple(pos(SI[n]), pos(SR[m]), Sc, n, m);
        }
        const double wm = weights_[m];
        if (sir) {
            dSS[m] = -2.0 * tau * ssi;
            dSI[m] = tau * (ssi - isi) - tau * wm * SI[m] - gamma * SI[m];
            dII[m] = 2.0 * tau * isi + 2.0 * tau * wm * SI[m] - 2.0 * gamma * II[m];
            dSR[m] = -tau * isr + gamma * SI[m];
            dIR[m] = tau * isr + gamma * (II[m] - IR[m]);
            // doubly counted R-R pairs gain two ordered pairs per I-R recovery
            dRR[m] = 2.0 * gamma * IR[m];
        } else {
            dSS[m] = 2.0 * gamma * SI[m] - 2.0 * tau * ssi;
            dSI[m] = gamma * (II[m] - SI[m]) + tau * (ssi - isi) - tau * wm * SI[m];
            dII[m] = -2.0 * gamma * II[m] + 2.0 * tau * isi + 2.0 * tau * wm * SI[m];
            dSR[m] = 0.0;
            dIR[m] = 0.0;
            dRR[m] = 0.0;
        }
    }
}

namespace {

PairwiseState evaluate(PairwiseModel model, const PairwiseState& state, const WeightClasses& wc,
                       EpidemicParams params, const Closure& closure)
{
    if (state.classes() != wc.size())
        throw InvalidArgument("pairwise rhs: state has " + std::to_string(state.classes()) +
                              " classes but the weight alphabet has " + std::to_string(wc.size()));
    const PairwiseSystem system(model, wc, params, closure);
    PairwiseState out(model, state.classes());
    system(0.0, state.values(), out.values());
    return out;
}

} // namespace

PairwiseState sis_rhs(const PairwiseState& state, const WeightClasses& wc, EpidemicParams params,
                      const Closure& closure)
{
    return evaluate(PairwiseModel::SIS, state, wc, params, closure);
}

PairwiseState sir_rhs(const PairwiseState& state, const WeightClasses& wc, EpidemicParams params,
                      const Closure& closure)
{
    return evaluate(PairwiseModel::SIR, state, wc, params, closure);
}

UnweightedReferenceSystem::UnweightedReferenceSystem(PairwiseModel model, double degree, EpidemicParams params,
                                                     double weight)
    : model_(model), degree_(degree), params_(params), weight_(weight)
{
    params_.validate();
    if (!(degree_ >= 1.0))
        throw InvalidArgument("reference pairwise model: degree must be >= 1");
    if (!(weight_ > 0.0))
        throw InvalidArgument("reference pairwise model: weight must be positive");
}

void UnweightedReferenceSystem::operator()(double, std::span<const double> y, std::span<double> dydt) const
{
    if (y.size() != PairwiseState::dimension(1))
        throw InvalidArgument("reference pairwise model: expects a single-class state");
    const auto pos = [](double x) { return x > 0.0 ? x : 0.0; };
    const double beta = params_.tau * weight_;
    const double g = params_.gamma;
    const double S = y[0], I = y[1];
    const double SS = y[3], SI = y[4], II = y[5], SR = y[6], IR = y[7];
    const double Sc = pos(S);
    const double c = (degree_ - 1.0) / degree_;
    const auto triple = [&](double ab, double bc) { return Sc > 0.0 ? c * pos(ab) * pos(bc) / Sc : 0.0; };
    const double SSI = triple(SS, SI);
    const double ISI = triple(SI, SI);
    const double ISR = triple(SI, SR);

    std::fill(dydt.begin(), dydt.end(), 0.0);
    if (model_ == PairwiseModel::SIS) {
        dydt[0] = g * I - beta * SI;
        dydt[1] = beta * SI - g * I;
        dydt[3] = 2.0 * g * SI - 2.0 * beta * SSI;
        dydt[4] = g * (II - SI) + beta * (SSI - ISI - SI);
        dydt[5] = -2.0 * g * II + 2.0 * beta * (ISI + SI);
    } else {
        dydt[0] = -beta * SI;
        dydt[1] = beta * SI - g * I;
        dydt[2] = g * I;
        dydt[3] = -2.0 * beta * SSI;
        dydt[4] = beta * (SSI - ISI - SI) - g * SI;
        dydt[5] = 2.0 * beta * (ISI + SI) - 2.0 * g * II;
        dydt[6] = -beta * ISR + g * SI;
        dydt[7] = beta * ISR + g * (II - IR);
        dydt[8] = 2.0 * g * IR;
    }
}

PairwiseState unweighted_reference_rhs(const PairwiseState& state, double k, EpidemicParams params, double weight)
{
    if (state.classes() != 1)
        throw InvalidArgument("reference pairwise model: expects a single-class state");
    const UnweightedReferenceSystem system(state.model(), k, params, weight);
    PairwiseState out(state.model(), 1);
    system(0.0, state.values(), out.values());
    return out;
}

PairwiseState initial_conditions(PairwiseModel model, double n, double initial_fraction, const WeightClasses& wc)
{
    wc.validate();
    if (!(initial_fraction > 0.0 && initial_fraction < 1.0))
        throw InvalidArgument("initial conditions: infected fraction must lie in (0, 1)");
    if (!(n > 0.0))
        throw InvalidArgument("initial conditions: population size must be positive");

    PairwiseState state(model, wc.size());
    const double s = 1.0 - initial_fraction;
    const double i = initial_fraction;
    state.S() = s * n;
    state.I() = i * n;
    const double k = static_cast<double>(wc.degree);
    for (std::size_t m = 0; m < wc.size(); ++m) {
        const double links = wc.class_fraction(m) * k * n;
        state.pair(Pair::SS, m) = links * s * s;
        state.pair(Pair::SI, m) = links * s * i;
        state.pair(Pair::II, m) = links * i * i;
    }
    return state;
}

PairwiseState PairwiseSolution::at(double t) const
{
    return PairwiseState(model, classes, ode.at(t));
}

PairwiseState PairwiseSolution::final_state() const
{
    return PairwiseState(model, classes, ode.final_state());
}

PairwiseSolution integrate_pairwise(const PairwiseSystem& system, const PairwiseState& initial, double t_end,
                                    const IntegratorOptions& options)
{
    if (initial.classes() != system.classes() || initial.model() != system.model())
        throw InvalidArgument("integrate_pairwise: state does not match the system");
    PairwiseSolution sol;
    sol.model = system.model();
    sol.classes = system.classes();
    sol.ode = integrate(std::cref(system), initial.values(), 0.0, t_end, options);
    return sol;
}

void write_pairwise_csv(std::ostream& os, const PairwiseSolution& solution, std::span<const double> grid,
                        std::span<const double> weights)
{
    const std::size_t M = solution.classes;
    os << "# M=" << M << " weights=";
    for (std::size_t m = 0; m < weights.size(); ++m)
        os << (m ? "," : "") << csv_number(weights[m]);
    os << '\n';

    const bool sir = solution.model == PairwiseModel::SIR;
    const int families = sir ? 6 : 3;
    static constexpr const char* names[] = {"SS", "SI", "II", "SR", "IR", "RR"};
    os << "time,S,I,R";
    for (int p = 0; p < families; ++p)
        for (std::size_t m = 0; m < M; ++m)
            os << ',' << names[p] << '_' << (m + 1);
    os << '\n';

    for (double t : grid) {
        const PairwiseState s = solution.at(t);
        os << csv_number(t) << ',' << csv_number(s.S()) << ',' << csv_number(s.I()) << ',' << csv_number(s.R());
        for (int p = 0; p < families; ++p)
            for (std::size_t m = 0; m < M; ++m)
                os << ',' << csv_number(s.pair(static_cast<Pair>(p), m));
        os << '\n';
    }
}

} // namespace epinet
