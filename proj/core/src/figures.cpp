#include "epinet/figures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "epinet/config.hpp"
#include "epinet/csv.hpp"
#include "epinet/equilibria.hpp"
#include "epinet/harness.hpp"
#include "epinet/rng.hpp"
#include "epinet/thresholds.hpp"
#include "manifest.hpp"

namespace epinet {

namespace {

using nlohmann::ordered_json;

struct Bundle {
    std::filesystem::path dir;
    FigureBundle out;
    ordered_json curves = ordered_json::array();

    void write(const std::string& name, const std::string& contents)
    {
        write_text_file(dir / name, contents);
        out.files.push_back(dir / name);
    }

    void check(std::string name, bool passed, std::string detail)
    {
        out.checks.push_back({std::move(name), passed, std::move(detail)});
    }
};

std::string fmt(double v)
{
    return csv_number(v);
}

// ---------------------------------------------------------------- fig1

void figure1(Bundle& b)
{
    const int k = 6;
    const int k1 = 2;
    const double gamma = 1.0;
    std::vector<double> taus;
    for (int i = 0; i <= 300; ++i)
        taus.push_back(i / 100.0);

    struct Curve {
        std::string name;
        std::string model;
        double w1, w2, p1;
        std::vector<double> values;
    };
    std::vector<Curve> curves;
    curves.push_back({"max", "both", 1.0, 1.0, 1.0 / 3.0, {}});
    for (double w1 : {2.0, 5.0, 10.0})
        curves.push_back({"random_w1_" + fmt(w1), "random", w1, 0.5 / (1.0 - 0.5 / w1), 0.5 / w1, {}});
    for (double w1 : {0.2, 0.5, 1.4})
        curves.push_back({"fixed_w1_" + fmt(w1), "fixed", w1, (1.0 - w1 / 3.0) * 1.5, 1.0 / 3.0, {}});

    for (Curve& c : curves) {
        std::ostringstream os;
        os << "tau,R0\n";
        for (double tau : taus) {
            double v = 0.0;
            if (c.model == "fixed") {
                v = r0_fixed(k1, k - k1, c.w1, c.w2, tau, gamma).value;
            } else {
                const double w[] = {c.w1, c.w2};
                const double p[] = {c.p1, 1.0 - c.p1};
                v = r0_random(k, w, p, tau, gamma).value;
            }
            c.values.push_back(v);
            os << fmt(tau) << ',' << fmt(v) << '\n';
        }
        const std::string file = c.name + ".csv";
        b.write(file, os.str());
        b.curves.push_back(ordered_json{{"name", c.name},
                                        {"file", file},
                                        {"role", "line"},
                                        {"mode", c.model},
                                        {"k", k},
                                        {"k1", c.model == "fixed" ? ordered_json(k1) : ordered_json(nullptr)},
                                        {"w1", c.w1},
                                        {"w2", c.w2},
                                        {"p1", c.p1},
                                        {"gamma", gamma}});
    }

    // markers: random layout with the weights of the top fixed curve
    std::ostringstream stars;
    stars << "tau,R0\n";
    double star_gap = 0.0;
    for (int i = 1; i <= 12; ++i) {
        const double tau = i / 4.0;
        const double w[] = {1.4, 0.8};
        const double p[] = {1.0 / 3.0, 2.0 / 3.0};
        const double v = r0_random(k, w, p, tau, gamma).value;
        star_gap = std::max(star_gap, std::abs(v - r0_fixed(k1, k - k1, 1.4, 0.8, tau, gamma).value));
        stars << fmt(tau) << ',' << fmt(v) << '\n';
    }
    b.write("star_markers.csv", stars.str());
    b.curves.push_back(ordered_json{{"name", "star"},
                                    {"file", "star_markers.csv"},
                                    {"role", "marker"},
                                    {"mode", "random"},
                                    {"k", k},
                                    {"w1", 1.4},
                                    {"w2", 0.8},
                                    {"p1", 1.0 / 3.0},
                                    {"gamma", gamma}});

    bool below_max = true;
    bool random_ordered = true;
    bool fixed_ordered = true;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        for (std::size_t c = 1; c < curves.size(); ++c)
            below_max = below_max && curves[c].values[i] <= curves[0].values[i] + 1e-12;
        if (taus[i] > 0.0) {
            random_ordered = random_ordered && curves[1].values[i] > curves[2].values[i] &&
                             curves[2].values[i] > curves[3].values[i];
            fixed_ordered = fixed_ordered && curves[4].values[i] < curves[5].values[i] &&
                            curves[5].values[i] < curves[6].values[i];
        }
    }
    b.check("all curves below the equal-weight maximum", below_max, "tau in [0, 3]");
    b.check("random layout: R0 falls as w1 grows", random_ordered, "w1 = 2, 5, 10 with p1 w1 = 0.5");
    b.check("fixed layout: R0 rises with w1", fixed_ordered, "w1 = 0.2, 0.5, 1.4 with k1 = 2");
    b.check("star markers track the top fixed curve", star_gap < 0.05, "max gap " + fmt(star_gap));
}

// ---------------------------------------------------------------- fig2-6

struct CurveResult {
    std::string preset;
    PairwiseModel model;
    double ode_final = 0.0;  ///< I/N at the horizon (SIS endemic level)
    double ode_peak = 0.0;
    double ode_peak_time = 0.0;
    double ode_final_size = 0.0;  ///< R/N at the horizon (SIR)
    double max_discrepancy = std::numeric_limits<double>::quiet_NaN();
};

CurveResult prevalence_curve(Bundle& b, const std::string& preset, PairwiseModel model, const FigureOptions& opt)
{
    ExperimentConfig cfg;
    apply_preset(cfg, preset);
    cfg.network.nodes = opt.nodes;
    cfg.epidemic.model = model;
    cfg.pairwise.grid_points = opt.grid_points;
    const std::size_t index = b.curves.size();
    cfg.ensemble = {opt.runs, derive_seed(opt.seed, index), opt.threads, false};

    const double n = static_cast<double>(cfg.network.nodes);
    CurveResult res{preset, model};
    const double horizon = comparison_horizon(cfg.network, cfg.epidemic, cfg.pairwise);
    const std::vector<double> grid = uniform_grid(0.0, horizon, cfg.pairwise.grid_points);

    std::optional<ComparisonReport> cmp;
    PairwiseSolution sol;
    if (opt.runs > 0) {
        cmp = compare_models(cfg.network, cfg.epidemic, cfg.ensemble, cfg.pairwise);
        sol = cmp->pairwise;
        res.max_discrepancy = cmp->max_discrepancy;
    } else {
        sol = solve_pairwise(cfg.network, cfg.epidemic, cfg.pairwise, horizon);
    }

    const PairwiseState last = sol.at(horizon);
    res.ode_final = last.I() / n;
    res.ode_final_size = last.R() / n;
    // peak located on a fine grid of the dense output
    const std::size_t fine = 8001;
    for (std::size_t i = 0; i < fine; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(fine - 1);
        const double v = sol.at(t).I() / n;
        if (v > res.ode_peak) {
            res.ode_peak = v;
            res.ode_peak_time = t;
        }
    }

    std::ostringstream os;
    os << "time,ode_I_over_N";
    if (cmp)
        os << ",sim_I_over_N";
    os << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt(grid[i]) << ',' << fmt(sol.at(grid[i]).I() / n);
        if (cmp)
            os << ',' << fmt(cmp->simulation_prevalence[i]);
        os << '\n';
    }
    const std::string file = preset + "-" + std::string(to_string(model)) + ".csv";
    b.write(file, os.str());

    const ordered_json full = ordered_json::parse(config_to_json(cfg));
    ordered_json results{{"ode_final_I_over_N", res.ode_final},
                         {"ode_peak_I_over_N", res.ode_peak},
                         {"ode_peak_time", res.ode_peak_time}};
    if (model == PairwiseModel::SIR)
        results["ode_final_size"] = res.ode_final_size;
    if (cmp) {
        results["runs"] = cmp->runs;
        results["max_discrepancy"] = cmp->max_discrepancy;
    }
    b.curves.push_back(ordered_json{{"name", preset + "-" + std::string(to_string(model))},
                                    {"file", file},
                                    {"preset", preset},
                                    {"model", std::string(to_string(model))},
                                    {"closure", std::string(to_string(resolve_closure(cfg.network, cfg.pairwise).kind))},
                                    {"horizon", horizon},
                                    {"seed", cfg.ensemble.seed},
                                    {"network", full["network"]},
                                    {"epidemic", full["epidemic"]},
                                    {"results", results}});
    return res;
}

std::string values_text(const std::vector<CurveResult>& curves, double CurveResult::*field)
{
    std::string s;
    for (const auto& c : curves)
        s += (s.empty() ? "" : ", ") + c.preset + "=" + fmt(c.*field);
    return s;
}

bool strictly_decreasing(const std::vector<CurveResult>& curves, double CurveResult::*field)
{
    for (std::size_t i = 1; i < curves.size(); ++i)
        if (!(curves[i].*field < curves[i - 1].*field))
            return false;
    return true;
}

// Runs SIS and SIR for every preset and checks both end points fall in order.
void ordered_family(Bundle& b, const std::vector<std::string>& presets, const FigureOptions& opt,
                    const std::string& what)
{
    std::vector<CurveResult> sis, sir;
    for (const auto& p : presets)
        sis.push_back(prevalence_curve(b, p, PairwiseModel::SIS, opt));
    for (const auto& p : presets)
        sir.push_back(prevalence_curve(b, p, PairwiseModel::SIR, opt));
    b.check("SIS endemic prevalence decreases " + what, strictly_decreasing(sis, &CurveResult::ode_final),
            values_text(sis, &CurveResult::ode_final));
    b.check("SIR peak prevalence decreases " + what, strictly_decreasing(sir, &CurveResult::ode_peak),
            values_text(sir, &CurveResult::ode_peak));
}

void figure5(Bundle& b, const FigureOptions& opt)
{
    for (const std::string row : {"top", "bottom"}) {
        const auto rs = prevalence_curve(b, "fig5-" + row + "-random", PairwiseModel::SIS, opt);
        const auto fs = prevalence_curve(b, "fig5-" + row + "-fixed", PairwiseModel::SIS, opt);
        const auto rr = prevalence_curve(b, "fig5-" + row + "-random", PairwiseModel::SIR, opt);
        const auto fr = prevalence_curve(b, "fig5-" + row + "-fixed", PairwiseModel::SIR, opt);
        (void)rs;
        (void)fs;
        b.check("random layout peaks no later than fixed (" + row + ")", rr.ode_peak_time <= fr.ode_peak_time,
                "peak times " + fmt(rr.ode_peak_time) + " vs " + fmt(fr.ode_peak_time));
    }
}

// ---------------------------------------------------------------- fig7

void figure7(Bundle& b, const FigureOptions& opt)
{
    const double gamma = 1.0;
    const double n = static_cast<double>(opt.nodes);
    std::vector<double> line_taus;
    for (int i = 1; i <= 60; ++i)
        line_taus.push_back(i / 20.0);
    const std::vector<double> marker_taus = {0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    const std::vector<double> p1s = {0.9, 0.5, 0.1, 0.01};

    std::vector<std::vector<double>> newton_at_markers;
    bool newton_matches_ode = true;
    double worst_gap = 0.0;
    for (std::size_t c = 0; c < p1s.size(); ++c) {
        const double p1 = p1s[c];
        const WeightClasses wc = WeightClasses::random(5, {10.0, 1.0}, {p1, 1.0 - p1});
        const auto points = sweep_endemic(wc, line_taus, gamma, ClosureKind::Classic, n);
        std::ostringstream line;
        write_sweep_csv(line, points);
        const std::string line_file = "line_p" + fmt(p1) + ".csv";
        b.write(line_file, line.str());

        std::ostringstream markers;
        markers << "tau,newton_I_over_N,ode_I_over_N,simulation_I_over_N,simulation_std_error,runs\n";
        std::vector<double> newton_values;
        for (double tau : marker_taus) {
            const auto it = std::find_if(points.begin(), points.end(), [&](const SweepPoint& p) { return p.tau == tau; });
            const double newton = it != points.end() && it->converged ? it->i_over_n
                                                                     : std::numeric_limits<double>::quiet_NaN();
            newton_values.push_back(newton);
            const EpidemicParams params{tau, gamma};
            const double ode =
                long_time_sis_state(wc, params, make_closure(ClosureKind::Classic, wc), n, 0.05, 500.0 / gamma).I() / n;
            if (std::isfinite(newton)) {
                worst_gap = std::max(worst_gap, std::abs(newton - ode));
                newton_matches_ode = newton_matches_ode && std::abs(newton - ode) <= 1e-6;
            }
            markers << fmt(tau) << ',' << fmt(newton) << ',' << fmt(ode);
            if (opt.runs > 0) {
                NetworkSpec net;
                net.nodes = opt.nodes;
                net.classes = wc;
                EpidemicSpec epi;
                epi.model = PairwiseModel::SIS;
                epi.params = params;
                const std::size_t index = c * marker_taus.size() + static_cast<std::size_t>(&tau - marker_taus.data());
                const EnsembleSpec ens{opt.runs, derive_seed(opt.seed, 1000 + index), opt.threads, false};
                const EndemicEstimate est = estimate_endemic_prevalence(net, epi, ens, 25.0 / gamma, 50.0 / gamma);
                markers << ',' << fmt(est.mean_i_over_n) << ',' << fmt(est.std_error) << ',' << est.runs << '\n';
            } else {
                markers << ",nan,nan,0\n";
            }
        }
        newton_at_markers.push_back(newton_values);
        const std::string marker_file = "markers_p" + fmt(p1) + ".csv";
        b.write(marker_file, markers.str());
        b.curves.push_back(ordered_json{{"name", "p1=" + fmt(p1)},
                                        {"line_file", line_file},
                                        {"marker_file", marker_file},
                                        {"mode", "random"},
                                        {"closure", "classic"},
                                        {"k", 5},
                                        {"w1", 10.0},
                                        {"w2", 1.0},
                                        {"p1", p1},
                                        {"gamma", gamma},
                                        {"nodes", opt.nodes},
                                        {"simulation_window", ordered_json::array({25.0 / gamma, 50.0 / gamma})}});
    }

    bool ordered = true;
    for (std::size_t t = 0; t < marker_taus.size(); ++t)
        for (std::size_t c = 1; c < p1s.size(); ++c) {
            const double hi = newton_at_markers[c - 1][t];
            const double lo = newton_at_markers[c][t];
            if (std::isfinite(hi) && std::isfinite(lo))
                ordered = ordered && lo <= hi + 1e-9;
        }
    b.check("endemic prevalence falls with p1", ordered, "p1 = 0.9, 0.5, 0.1, 0.01 at every marker tau");
    b.check("Newton roots match long-time integration", newton_matches_ode, "max gap " + fmt(worst_gap) + " I/N");
}

} // namespace

FigureBundle reproduce_figure(std::string_view name, const std::filesystem::path& out_dir, const FigureOptions& opt)
{
    bool known = false;
    for (auto f : kFigureNames)
        known = known || f == name;
    if (!known)
        throw ConfigError("figure", "unknown figure '" + std::string(name) + "' (expected fig1..fig7)");
    if (opt.nodes < 2 || opt.grid_points < 2)
        throw ConfigError("figure", "need at least 2 nodes and 2 grid points");

    Bundle b{out_dir, {}, ordered_json::array()};
    b.out.name = std::string(name);
    std::filesystem::create_directories(out_dir);

    if (name == "fig1")
        figure1(b);
    else if (name == "fig2")
        ordered_family(b, {"fig2-top", "fig2-bottom"}, opt, "with average weight (2 to 1)");
    else if (name == "fig3") {
        ordered_family(b, {"fig3-w2.5", "fig3-w5", "fig3-w10"}, opt, "as w1 grows (2.5, 5, 10)");
        prevalence_curve(b, "fig3-inset", PairwiseModel::SIS, opt);
        prevalence_curve(b, "fig3-inset", PairwiseModel::SIR, opt);
    } else if (name == "fig4")
        ordered_family(b, {"fig4-p0.01", "fig4-p0.05", "fig4-p0.09"}, opt, "as p1 grows (0.01, 0.05, 0.09)");
    else if (name == "fig5")
        figure5(b, opt);
    else if (name == "fig6")
        ordered_family(b, {"fig6-k1-5", "fig6-k1-4", "fig6-k1-3", "fig6-k1-2", "fig6-k1-1"}, opt,
                       "as k1 falls (5 to 1)");
    else
        figure7(b, opt);

    ordered_json manifest = manifest_header();
    manifest["figure"] = std::string(name);
    manifest["options"] = ordered_json{{"runs", opt.runs},
                                       {"seed", opt.seed},
                                       {"nodes", opt.nodes},
                                       {"grid_points", opt.grid_points},
                                       {"threads", opt.threads}};
    manifest["defaults"] = ordered_json{{"initial_infected_fraction", 0.05},
                                        {"sis_t_max", "15/gamma"},
                                        {"sir_horizon", "until pairwise I/N < 1e-4 after the peak"},
                                        {"simulation_t_max_sir", "extinction"},
                                        {"rel_tol", PairwiseSpec{}.rel_tol},
                                        {"abs_tol", PairwiseSpec{}.abs_tol}};
    manifest["curves"] = b.curves;
    ordered_json checks = ordered_json::array();
    for (const auto& c : b.out.checks)
        checks.push_back(ordered_json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    manifest["checks"] = checks;
    b.write("manifest.json", manifest.dump(2) + "\n");
    return b.out;
}

} // namespace epinet
