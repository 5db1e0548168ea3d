// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/stats.hpp"
#include "epinet/config.hpp"
#include "epinet/equilibria.hpp"
#include "epinet/gillespie.hpp"
#include "epinet/harness.hpp"
#include "epinet/netgen.hpp"
#include "epinet/pairwise.hpp"
#include "epinet/thresholds.hpp"

using namespace epinet;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            detail << "[violated] ";
        }
        detail << what << "; ";
    }
};

std::string num(double v, int digits = 10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, double time_limit_s, const std::function<void(Outcome&)>& body)
{
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.passed = false;
        out.detail << "exception: " << e.what() << "; ";
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(elapsed <= time_limit_s, "runtime " + num(elapsed, 3) + " s (limit " + num(time_limit_s, 3) + " s)");
    if (!out.passed)
        ++failures;
    std::printf("%s %d %s: %s\n", out.passed ? "PASS" : "FAIL", id, title.c_str(), out.detail.str().c_str());
    std::fflush(stdout);
}

ExperimentConfig preset(const std::string& name, PairwiseModel model)
{
    ExperimentConfig cfg;
    apply_preset(cfg, name);
    cfg.epidemic.model = model;
    return cfg;
}

// Largest relative conservation drift over the accepted steps of a pairwise solution.
double conservation_drift(const PairwiseSolution& sol, double n)
{
    const PairwiseState first(sol.model, sol.classes, sol.ode.state(0));
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.ode.size(); ++i) {
        const PairwiseState s(sol.model, sol.classes, sol.ode.state(i));
        worst = std::max(worst, std::abs(s.singles_sum() - n) / n);
        for (std::size_t m = 0; m < sol.classes; ++m)
            worst = std::max(worst, std::abs(s.pair_sum(m) - first.pair_sum(m)) / first.pair_sum(m));
    }
    return worst;
}

double sir_peak_time(const ExperimentConfig& cfg)
{
    const double horizon = comparison_horizon(cfg.network, cfg.epidemic, cfg.pairwise);
    const auto sol = solve_pairwise(cfg.network, cfg.epidemic, cfg.pairwise, horizon);
    double best = -1.0, best_t = 0.0;
    const int points = 20000;
    for (int i = 0; i <= points; ++i) {
        const double t = horizon * i / points;
        const double v = sol.at(t).I();
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

double endemic_root(const WeightClasses& wc, EpidemicParams params, double n, SteadyStateResult* out = nullptr)
{
    const Closure closure = default_closure(wc);
    const auto ode = long_time_sis_state(wc, params, closure, n, 0.05, 500.0 / params.gamma);
    const auto res = solve_sis_endemic(wc, params, closure, n, ode);
    if (out)
        *out = res;
    return res.state.I() / n;
}

void closed_form_thresholds(Outcome& o)
{
    // hand evaluation: r_i = tau w_i / (tau w_i + gamma)
    const double r1 = 1.4 / 2.4, r2 = 0.8 / 1.8;
    const double random_oracle = 5.0 * (r1 / 3.0 + 2.0 * r2 / 3.0);
    const double a = r1, d = 3.0 * r2, trace = a + d, det = a * d - 2.0 * r1 * 4.0 * r2;
    const double fixed_oracle = 0.5 * (trace + std::sqrt(trace * trace - 4.0 * det));

    const double weights[] = {1.4, 0.8};
    const double probs[] = {1.0 / 3.0, 2.0 / 3.0};
    const double random = r0_random(6, weights, probs, 1.0, 1.0).value;
    const double fixed = r0_fixed(2, 4, 1.4, 0.8, 1.0, 1.0).value;
    o.require(std::abs(random - random_oracle) <= 1e-9, "R0_random " + num(random) + " vs oracle " + num(random_oracle));
    o.require(std::abs(random_oracle - 2.453704) <= 5e-7, "oracle rounds to 2.453704");
    o.require(std::abs(fixed - fixed_oracle) <= 1e-9, "R0_fixed " + num(fixed) + " vs oracle " + num(fixed_oracle));
    o.require(std::abs(fixed_oracle - 2.446520) <= 5e-7, "oracle rounds to 2.446520");

    double worst = 0.0;
    for (double tau : {0.2, 1.0, 3.0}) {
        for (double W : {0.5, 1.0, 4.0}) {
            const double expected = 5.0 * tau * W / (tau * W + 1.0);
            const double w[] = {W, W};
            for (int k1 = 1; k1 <= 5; ++k1) {
                const double p[] = {k1 / 6.0, 1.0 - k1 / 6.0};
                worst = std::max(worst, std::abs(r0_random(6, w, p, tau, 1.0).value - expected));
                worst = std::max(worst, std::abs(r0_fixed(k1, 6 - k1, W, W, tau, 1.0).value - expected));
            }
        }
    }
    o.require(worst <= 1e-12, "equal-weight coincidence max gap " + num(worst, 3));
}

void theorem1(Outcome& o)
{
    const auto report = check_theorem1(10000, 20240101);
    o.require(report.samples == 10000 && report.violations == 0,
              std::to_string(report.samples) + " draws, " + std::to_string(report.violations) +
                  " violations, max excess " + num(report.max_excess, 3));
}

void theorem2(Outcome& o)
{
    const auto report = check_theorem2(101);
    o.require(report.random.passed, "random: argmax w1=" + num(report.random.argmax_w1) + " max " +
                                        num(report.random.max_value) + " expected " + num(report.expected_max));
    o.require(report.fixed.passed, "fixed: argmax w1=" + num(report.fixed.argmax_w1) + " max " +
                                       num(report.fixed.max_value) + " resolution " + num(report.resolution, 3));
}

void pairwise_thresholds(Outcome& o)
{
    const double equal = r_pairwise_classic(6, 0.3, 1.0, 1.0, 1.0, 1.0).value;
    o.require(std::abs(equal - 4.0) <= 1e-12, "equal weights R=" + num(equal));
    const double equal_mod = r_pairwise_modified(2, 4, 1.0, 1.0, 1.0, 1.0).value;
    o.require(std::abs(equal_mod - 4.0) <= 1e-12, "equal weights, modified closure R=" + num(equal_mod));

    // hand evaluation through the cancellation identities
    const double classic_oracle = 0.5 * (1.75 + std::sqrt(1.75 * 1.75 + 75.0));
    const double classic = r_pairwise_classic(5, 0.2, 5.0, 1.25, 1.0, 1.0).value;
    o.require(std::abs(classic - classic_oracle) <= 1e-5 && std::abs(classic_oracle - 5.29265) <= 5e-6,
              "classic closure R=" + num(classic) + " oracle " + num(classic_oracle));

    const double modified_oracle = 0.5 * (3.75 + std::sqrt(3.75 * 3.75 + 200.0));
    const double modified = r_pairwise_modified(2, 8, 10.0, 1.25, 0.5, 1.0).value;
    o.require(std::abs(modified - modified_oracle) <= 1e-5,
              "modified closure R=" + num(modified) + " oracle " + num(modified_oracle) +
                  " (quoted 9.19046 differs from the hand evaluation by " + num(modified_oracle - 9.19046, 3) + ")");
}

void reduction(Outcome& o)
{
    const double n = 1000.0;
    double worst = 0.0;
    IntegratorOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-11;
    for (PairwiseModel model : {PairwiseModel::SIS, PairwiseModel::SIR}) {
        for (const auto& wc : {WeightClasses::random(5, {1.0, 1.0}, {0.2, 0.8}), WeightClasses::fixed({1.0, 1.0}, {2, 4})}) {
            const EpidemicParams p{1.0, 1.0};
            const PairwiseSystem weighted(model, wc, p, make_closure(ClosureKind::Classic, wc));
            const UnweightedReferenceSystem reference(model, wc.degree, p);
            const auto init = initial_conditions(model, n, 0.05, wc);
            const auto a = integrate_pairwise(weighted, init, 15.0, opts);
            const auto b = integrate(reference, init.aggregated().values(), 0.0, 15.0, opts);
            for (int i = 0; i <= 1500; ++i) {
                const double t = 0.01 * i;
                const auto x = a.at(t).aggregated();
                const auto y = b.at(t);
                for (std::size_t j = 0; j < y.size(); ++j)
                    worst = std::max(worst, std::abs(x.values()[j] - y[j]));
            }
        }
    }
    o.require(worst <= 1e-8 * n, "max |aggregated - reference| = " + num(worst, 3) + " over t in [0, 15]");
}

void conservation(Outcome& o)
{
    double worst = 0.0;
    std::size_t trajectories = 0;
    for (const char* name : {"fig2-top", "fig2-bottom", "fig3-w10", "fig4-p0.09", "fig5-top-random", "fig5-top-fixed",
                             "fig5-bottom-fixed", "fig6-k1-1"}) {
        for (PairwiseModel model : {PairwiseModel::SIS, PairwiseModel::SIR}) {
            const auto cfg = preset(name, model);
            const double horizon = comparison_horizon(cfg.network, cfg.epidemic, cfg.pairwise);
            const auto sol = solve_pairwise(cfg.network, cfg.epidemic, cfg.pairwise, horizon);
            worst = std::max(worst, conservation_drift(sol, static_cast<double>(cfg.network.nodes)));
            ++trajectories;
        }
    }
    o.require(worst <= 1e-8, std::to_string(trajectories) + " ODE trajectories, max relative drift " + num(worst, 3));

    SimulationOptions sim_opts;
    sim_opts.check_every_event = true;
    sim_opts.audit_interval = 1000;
    std::uint64_t events = 0;
    std::size_t runs = 0;
    for (const char* name : {"fig2-top", "fig5-top-fixed"}) {
        for (PairwiseModel model : {PairwiseModel::SIS, PairwiseModel::SIR}) {
            const auto cfg = preset(name, model);
            const Dynamics dyn = model == PairwiseModel::SIS ? Dynamics::SIS : Dynamics::SIR;
            for (std::size_t r = 0; r < 20; ++r) {
                const auto net = build_network(cfg.network, member_network_seed(99, r));
                GillespieSimulator sim(net, cfg.network.classes, cfg.epidemic.params, dyn, member_simulation_seed(99, r),
                                       sim_opts);
                sim.seed_random(cfg.epidemic.initial_fraction);
                sim.run(15.0);
                sim.audit();
                events += sim.events();
                ++runs;
            }
        }
    }
    o.require(events >= 1'000'000, std::to_string(runs) + " Gillespie runs, " + std::to_string(events) +
                                       " events checked after every event with full audits every 1000");
}

void fig2_agreement(Outcome& o)
{
    for (const char* name : {"fig2-top", "fig2-bottom"}) {
        for (PairwiseModel model : {PairwiseModel::SIS, PairwiseModel::SIR}) {
            auto cfg = preset(name, model);
            cfg.ensemble.runs = 100;
            cfg.ensemble.seed = 1;
            const auto report = compare_models(cfg.network, cfg.epidemic, cfg.ensemble, cfg.pairwise);
            o.require(report.max_discrepancy <= 0.05 && report.runs == 100,
                      std::string(name) + " " + std::string(to_string(model)) + " max |sim - ODE| " +
                          num(report.max_discrepancy, 4) + " over " + std::to_string(report.runs) + " runs");
        }
    }
}

void directional(Outcome& o)
{
    std::vector<double> levels;
    std::string text;
    for (const char* name : {"fig3-w2.5", "fig3-w5", "fig3-w10"}) {
        const auto cfg = preset(name, PairwiseModel::SIS);
        SteadyStateResult res;
        levels.push_back(endemic_root(cfg.network.classes, cfg.epidemic.params,
                                      static_cast<double>(cfg.network.nodes), &res));
        o.require(res.converged, std::string(name) + " root converged");
        text += std::string(name) + "=" + num(levels.back(), 6) + " ";
    }
    o.require(levels[0] > levels[1] && levels[1] > levels[2], "endemic I/N strictly decreasing: " + text);

    for (const char* row : {"top", "bottom"}) {
        const double random = sir_peak_time(preset(std::string("fig5-") + row + "-random", PairwiseModel::SIR));
        const double fixed = sir_peak_time(preset(std::string("fig5-") + row + "-fixed", PairwiseModel::SIR));
        o.require(random <= fixed, std::string("fig5 ") + row + " SIR peak times random " + num(random, 5) +
                                       " vs fixed " + num(fixed, 5));
    }
}

void steady_cross_validation(Outcome& o)
{
    const double n = 1000.0;
    double worst_ode = 0.0;
    std::size_t compared = 0;
    for (double p1 : {0.9, 0.5, 0.1, 0.01}) {
        for (double tau : {0.5, 2.0}) {
            const auto wc = WeightClasses::random(5, {10.0, 1.0}, {p1, 1.0 - p1});
            const EpidemicParams params{tau, 1.0};
            const Closure closure = default_closure(wc);
            const auto ode = long_time_sis_state(wc, params, closure, n, 0.05, 500.0);
            const auto root = solve_sis_endemic(wc, params, closure, n, ode);
            const double gap = std::abs(root.state.I() - ode.I());
            worst_ode = std::max(worst_ode, gap);
            o.require(root.converged && gap <= 1e-6 * n,
                      "p1=" + num(p1) + " tau=" + num(tau) + " Newton-ODE gap " + num(gap, 3));

            const double R = r_pairwise_classic(5, p1, 10.0, 1.0, tau, 1.0).value;
            if (R <= 1.2)
                continue;
            NetworkSpec net;
            net.nodes = 1000;
            net.classes = wc;
            EpidemicSpec epi;
            epi.params = params;
            EnsembleSpec ens;
            ens.runs = 50;
            ens.seed = derive_seed(7, compared);
            const auto est = estimate_endemic_prevalence(net, epi, ens, 25.0, 50.0);
            const double diff = std::abs(est.mean_i_over_n - root.state.I() / n);
            o.require(diff <= 0.05, "p1=" + num(p1) + " tau=" + num(tau) + " R=" + num(R, 4) + " simulation " +
                                        num(est.mean_i_over_n, 4) + " vs root " + num(root.state.I() / n, 4));
            ++compared;
        }
    }
    o.detail << compared << " points above R=1.2 compared with simulation; ";
}

void generator_statistics(Outcome& o)
{
    for (const auto& counts : {std::vector<int>{2, 8}, std::vector<int>{1, 5}, std::vector<int>{5, 1}}) {
        const auto wc = WeightClasses::fixed({1.0, 1.0}, counts);
        const auto net = build_fixed_weight_network(1000, wc, 4242);
        bool exact = true;
        for (ClassIndex m = 0; m < counts.size(); ++m)
            for (auto d : class_degrees(net, m))
                exact = exact && static_cast<int>(d) == counts[m];
        o.require(exact, "fixed k=(" + std::to_string(counts[0]) + "," + std::to_string(counts[1]) +
                             ") per-class degrees exact at N=1000");
    }

    const std::size_t n = 10000;
    const int k = 5;
    const double p1 = 0.2;
    const auto wc = WeightClasses::random(k, {5.0, 1.25}, {p1, 1.0 - p1});
    const auto net = build_weighted_network(n, wc, 2718);
    std::vector<double> observed(k + 1, 0.0), expected(k + 1, 0.0);
    for (auto d : class_degrees(net, 0))
        observed[d] += 1.0;
    for (int j = 0; j <= k; ++j)
        expected[j] = static_cast<double>(n) * testing_stats::binomial_pmf(k, j, p1);
    const double p = testing_stats::chi_square_p_value(observed, expected);
    o.require(p > 0.01, "random layout class-1 counts chi-square p=" + num(p, 4));
}

} // namespace

int main()
{
    criterion(1, "closed-form R0 values", 1.0, closed_form_thresholds);
    criterion(2, "theorem 1 property suite", 5.0, theorem1);
    criterion(3, "theorem 2 grid check", 1.0, theorem2);
    criterion(4, "pairwise thresholds", 1.0, pairwise_thresholds);
    criterion(5, "equal-weight reduction", 5.0, reduction);
    criterion(6, "conservation", 60.0, conservation);
    criterion(7, "fig2 simulation agreement", 300.0, fig2_agreement);
    criterion(8, "directional claims", 300.0, directional);
    criterion(9, "steady-state cross-validation", 600.0, steady_cross_validation);
    criterion(10, "generator statistics", 30.0, generator_statistics);
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
