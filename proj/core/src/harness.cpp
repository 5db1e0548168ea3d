#include "epinet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "epinet/csv.hpp"
#include "epinet/equilibria.hpp"
#include "epinet/figures.hpp"
#include "manifest.hpp"
#include "epinet/netgen.hpp"
#include "epinet/rng.hpp"

namespace epinet {

namespace {

using nlohmann::ordered_json;

std::mutex& writer_mutex()
{
    static std::mutex m;
    return m;
}

double default_sis_horizon(const EpidemicSpec& epidemic)
{
    return 15.0 / epidemic.params.gamma;
}

double prevalence(const TrajectorySample& s, double n)
{
    return s.I / n;
}

} // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    if (count == 0)
        return;
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(work);
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

WeightedNetwork build_network(const NetworkSpec& spec, std::uint64_t seed)
{
    if (spec.topology == Topology::ErdosRenyi)
        return assign_weights_random(build_erdos_renyi(spec.nodes, spec.mean_degree, seed), spec.classes, seed);
    return build_weighted_network(spec.nodes, spec.classes, seed);
}

std::uint64_t member_network_seed(std::uint64_t seed, std::size_t member)
{
    return derive_seed(seed, 2 * static_cast<std::uint64_t>(member));
}

std::uint64_t member_simulation_seed(std::uint64_t seed, std::size_t member)
{
    return derive_seed(seed, 2 * static_cast<std::uint64_t>(member) + 1);
}

EnsembleResult run_ensemble(const NetworkSpec& network, const EpidemicSpec& epidemic, const EnsembleSpec& ensemble,
                            double t_max, SimulationOptions options)
{
    if (ensemble.runs == 0)
        throw InvalidArgument("ensemble: runs must be positive");
    const Dynamics dynamics = epidemic.model == PairwiseModel::SIS ? Dynamics::SIS : Dynamics::SIR;

    std::vector<std::optional<Trajectory>> results(ensemble.runs);
    std::vector<std::string> errors(ensemble.runs);
    parallel_for(ensemble.runs, ensemble.threads, [&](std::size_t i) {
        try {
            const WeightedNetwork net = build_network(network, member_network_seed(ensemble.seed, i));
            GillespieSimulator sim(net, network.classes, epidemic.params, dynamics,
                                   member_simulation_seed(ensemble.seed, i), options);
            sim.seed_random(epidemic.initial_fraction);
            results[i] = sim.run(t_max);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    EnsembleResult out;
    for (std::size_t i = 0; i < ensemble.runs; ++i) {
        if (results[i]) {
            out.runs.push_back(std::move(*results[i]));
            out.members.push_back(i);
        } else {
            ++out.failures;
            out.failure_messages.push_back("run " + std::to_string(i) + ": " + errors[i]);
        }
    }
    if (out.runs.size() * 10 < ensemble.runs * 9) {
        throw NumericError("ensemble: only " + std::to_string(out.runs.size()) + " of " +
                           std::to_string(ensemble.runs) + " runs succeeded; first failure: " +
                           out.failure_messages.front());
    }
    return out;
}

Closure resolve_closure(const NetworkSpec& network, const PairwiseSpec& pairwise)
{
    if (pairwise.closure)
        return make_closure(*pairwise.closure, network.classes);
    return default_closure(network.classes);
}

PairwiseSolution solve_pairwise(const NetworkSpec& network, const EpidemicSpec& epidemic, const PairwiseSpec& pairwise,
                                double t_end)
{
    if (network.topology == Topology::ErdosRenyi && network.mean_degree != std::round(network.mean_degree))
        throw InvalidArgument("pairwise: an integer mean degree is required");
    const PairwiseSystem system(epidemic.model, network.classes, epidemic.params, resolve_closure(network, pairwise));
    const PairwiseState init = initial_conditions(epidemic.model, static_cast<double>(network.nodes),
                                                  epidemic.initial_fraction, network.classes);
    IntegratorOptions options;
    options.rel_tol = pairwise.rel_tol;
    options.abs_tol = pairwise.abs_tol;
    return integrate_pairwise(system, init, t_end, options);
}

double comparison_horizon(const NetworkSpec& network, const EpidemicSpec& epidemic, const PairwiseSpec& pairwise)
{
    if (epidemic.t_max)
        return *epidemic.t_max;
    if (epidemic.model == PairwiseModel::SIS)
        return default_sis_horizon(epidemic);

    const double n = static_cast<double>(network.nodes);
    const PairwiseSystem system(epidemic.model, network.classes, epidemic.params, resolve_closure(network, pairwise));
    const PairwiseState init =
        initial_conditions(epidemic.model, n, epidemic.initial_fraction, network.classes);
    IntegratorOptions options;
    options.rel_tol = pairwise.rel_tol;
    options.abs_tol = pairwise.abs_tol;
    double peak = 0.0;
    options.stop_when = [&peak, n](double, std::span<const double> y) {
        peak = std::max(peak, y[1]);
        return y[1] < peak && y[1] < 1e-4 * n;
    };
    const double limit = 1e4 / epidemic.params.gamma;
    const OdeSolution sol = integrate(system, init.values(), 0.0, limit, options);
    return sol.final_time();
}

ComparisonReport compare_models(const NetworkSpec& network, const EpidemicSpec& epidemic,
                                const EnsembleSpec& ensemble, const PairwiseSpec& pairwise)
{
    ComparisonReport report;
    const double horizon = comparison_horizon(network, epidemic, pairwise);
    report.time_grid = uniform_grid(0.0, horizon, pairwise.grid_points);

    const double sim_t_max =
        epidemic.t_max ? *epidemic.t_max
                       : (epidemic.model == PairwiseModel::SIS ? horizon : std::numeric_limits<double>::infinity());
    const EnsembleResult sims = run_ensemble(network, epidemic, ensemble, sim_t_max);
    report.runs = sims.runs.size();
    report.ensemble_mean = ensemble_mean(sims.runs, report.time_grid);
    report.pairwise = solve_pairwise(network, epidemic, pairwise, horizon);

    const double n = static_cast<double>(network.nodes);
    for (std::size_t i = 0; i < report.time_grid.size(); ++i) {
        const double sim = prevalence(report.ensemble_mean.samples[i], n);
        const double ode = report.pairwise.at(report.time_grid[i]).I() / n;
        report.simulation_prevalence.push_back(sim);
        report.pairwise_prevalence.push_back(ode);
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(sim - ode));
    }
    return report;
}

EndemicEstimate estimate_endemic_prevalence(const NetworkSpec& network, const EpidemicSpec& epidemic,
                                            const EnsembleSpec& ensemble, double t_from, double t_to)
{
    if (epidemic.model != PairwiseModel::SIS)
        throw InvalidArgument("endemic estimate: SIS dynamics required");
    if (!(t_to > t_from && t_from >= 0.0))
        throw InvalidArgument("endemic estimate: need 0 <= t_from < t_to");
    const EnsembleResult sims = run_ensemble(network, epidemic, ensemble, t_to);
    const double n = static_cast<double>(network.nodes);

    EndemicEstimate est;
    est.runs = sims.runs.size();
    std::vector<double> averages;
    for (const Trajectory& traj : sims.runs) {
        // exact time average of the step function over the window
        double area = 0.0;
        const auto& s = traj.samples;
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double a = std::max(s[j].time, t_from);
            const double b = std::min(j + 1 < s.size() ? s[j + 1].time : t_to, t_to);
            if (b > a)
                area += s[j].I * (b - a);
        }
        if (s.front().time > t_from)
            area += s.front().I * (std::min(s.front().time, t_to) - t_from);
        averages.push_back(area / (t_to - t_from) / n);
        if (s.back().I == 0.0)
            ++est.extinct_runs;
    }
    double sum = 0.0;
    for (double a : averages)
        sum += a;
    est.mean_i_over_n = sum / static_cast<double>(averages.size());
    if (averages.size() > 1) {
        double ss = 0.0;
        for (double a : averages)
            ss += (a - est.mean_i_over_n) * (a - est.mean_i_over_n);
        est.std_error = std::sqrt(ss / static_cast<double>(averages.size() - 1) / static_cast<double>(averages.size()));
    }
    return est;
}

std::vector<ThresholdReport> compute_thresholds(const ExperimentConfig& config)
{
    const WeightClasses& wc = config.network.classes;
    const EpidemicParams& p = config.epidemic.params;
    std::vector<ThresholdKind> kinds = config.thresholds;
    if (kinds.empty()) {
        if (wc.size() != 2)
            kinds = {ThresholdKind::R0Random};
        else if (wc.mode == WeightMode::Random)
            kinds = {ThresholdKind::R0Random, ThresholdKind::RClassic};
        else
            kinds = {ThresholdKind::R0Fixed, ThresholdKind::RModified};
    }

    std::vector<double> fractions;
    for (std::size_t m = 0; m < wc.size(); ++m)
        fractions.push_back(wc.class_fraction(m));
    // integer per-class link counts, either given or implied by k * p_i
    const auto class_counts = [&](const std::string& path) {
        if (wc.mode == WeightMode::Fixed)
            return std::pair{wc.counts[0], wc.counts[1]};
        const double k1 = fractions[0] * wc.degree;
        if (std::abs(k1 - std::round(k1)) > 1e-9)
            throw ConfigError(path, "needs k * p1 to be an integer");
        const int k1i = static_cast<int>(std::lround(k1));
        return std::pair{k1i, wc.degree - k1i};
    };

    std::vector<ThresholdReport> reports;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const std::string path = "thresholds[" + std::to_string(i) + "]";
        if (kinds[i] != ThresholdKind::R0Random && wc.size() != 2)
            throw ConfigError(path, "requires exactly two weight classes");
        try {
            switch (kinds[i]) {
            case ThresholdKind::R0Random:
                reports.push_back(r0_random(wc.degree, wc.weights, fractions, p.tau, p.gamma));
                break;
            case ThresholdKind::R0Fixed: {
                const auto [k1, k2] = class_counts(path);
                reports.push_back(r0_fixed(k1, k2, wc.weights[0], wc.weights[1], p.tau, p.gamma));
                break;
            }
            case ThresholdKind::RClassic:
                reports.push_back(
                    r_pairwise_classic(wc.degree, fractions[0], wc.weights[0], wc.weights[1], p.tau, p.gamma));
                break;
            case ThresholdKind::RModified: {
                const auto [k1, k2] = class_counts(path);
                reports.push_back(r_pairwise_modified(k1, k2, wc.weights[0], wc.weights[1], p.tau, p.gamma));
                break;
            }
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const InvalidArgument& e) {
            throw ConfigError(path, e.what());
        }
    }
    return reports;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents)
{
    std::lock_guard lock(writer_mutex());
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out.flush())
        throw std::runtime_error("write failed for " + path.string());
}

namespace {

struct Writer {
    std::filesystem::path dir;
    ExperimentSummary summary;

    void write(const std::string& name, const std::string& contents)
    {
        write_text_file(dir / name, contents);
        summary.files.push_back(dir / name);
    }
};

std::string comparison_csv(const ComparisonReport& r)
{
    std::ostringstream os;
    os << "time,simulation_I_over_N,pairwise_I_over_N,abs_difference\n";
    for (std::size_t i = 0; i < r.time_grid.size(); ++i) {
        os << csv_number(r.time_grid[i]) << ',' << csv_number(r.simulation_prevalence[i]) << ','
           << csv_number(r.pairwise_prevalence[i]) << ','
           << csv_number(std::abs(r.simulation_prevalence[i] - r.pairwise_prevalence[i])) << '\n';
    }
    return os.str();
}

std::string runs_csv(const EnsembleResult& ens, std::uint64_t seed)
{
    std::ostringstream os;
    os << "run,network_seed,simulation_seed,events,final_time,final_S,final_I,final_R\n";
    for (std::size_t j = 0; j < ens.runs.size(); ++j) {
        const auto& t = ens.runs[j];
        const auto& last = t.samples.back();
        os << ens.members[j] << ',' << member_network_seed(seed, ens.members[j]) << ','
           << member_simulation_seed(seed, ens.members[j]) << ',' << t.events << ',' << csv_number(last.time) << ','
           << csv_number(last.S) << ',' << csv_number(last.I) << ',' << csv_number(last.R) << '\n';
    }
    return os.str();
}

void write_runs(Writer& w, const ExperimentConfig& cfg, const EnsembleResult& ens)
{
    w.write("runs.csv", runs_csv(ens, cfg.ensemble.seed));
    if (!cfg.ensemble.write_runs)
        return;
    for (std::size_t j = 0; j < ens.runs.size(); ++j) {
        std::ostringstream os;
        write_trajectory_csv(os, ens.runs[j]);
        char name[32];
        std::snprintf(name, sizeof name, "runs/run_%05zu.csv", ens.members[j]);
        w.write(name, os.str());
    }
}

ordered_json failures_json(const EnsembleResult& ens)
{
    ordered_json f = ordered_json::array();
    for (const auto& m : ens.failure_messages)
        f.push_back(m);
    return f;
}

std::string stats_csv(const NetworkStats& stats)
{
    std::ostringstream os;
    os << "class,degree,nodes\n";
    for (std::size_t d = 0; d < stats.degree_histogram.size(); ++d)
        if (stats.degree_histogram[d] > 0)
            os << "all," << d << ',' << stats.degree_histogram[d] << '\n';
    for (std::size_t m = 0; m < stats.class_degree_histograms.size(); ++m)
        for (std::size_t d = 0; d < stats.class_degree_histograms[m].size(); ++d)
            if (stats.class_degree_histograms[m][d] > 0)
                os << m << ',' << d << ',' << stats.class_degree_histograms[m][d] << '\n';
    return os.str();
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg)
{
    if (!cfg.kind)
        throw ConfigError("kind", "experiment kind is not set");
    const ExperimentKind kind = *cfg.kind;
    if (kind != ExperimentKind::Figure && !cfg.has_network)
        throw ConfigError("network", "a network section or a preset is required");

    if (kind == ExperimentKind::Figure) {
        FigureOptions fo;
        fo.runs = cfg.ensemble.runs;
        fo.seed = cfg.ensemble.seed;
        fo.nodes = cfg.network.nodes;
        fo.threads = cfg.ensemble.threads;
        fo.grid_points = cfg.pairwise.grid_points;
        const FigureBundle bundle = reproduce_figure(cfg.figure, cfg.output, fo);
        ExperimentSummary s;
        s.files = bundle.files;
        std::ostringstream os;
        os << bundle.name << ": " << bundle.files.size() << " files\n";
        for (const auto& c : bundle.checks)
            os << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';
        s.summary = os.str();
        return s;
    }

    Writer w{cfg.output, {}};
    std::filesystem::create_directories(cfg.output);
    const double n = static_cast<double>(cfg.network.nodes);
    ordered_json results;
    ordered_json resolved;
    std::ostringstream text;

    switch (kind) {
    case ExperimentKind::Generate: {
        const std::uint64_t seed = member_network_seed(cfg.ensemble.seed, 0);
        const WeightedNetwork net = build_network(cfg.network, seed);
        std::ostringstream edges;
        write_edge_list(edges, net, cfg.network.classes);
        w.write("network.edges", edges.str());
        const NetworkStats stats = network_stats(net, cfg.network.classes);
        w.write("degree_stats.csv", stats_csv(stats));
        resolved["network_seed"] = seed;
        results["edges"] = net.edge_count();
        results["class_edge_counts"] = stats.class_edge_counts;
        results["average_weight"] = stats.average_weight;
        text << "generated " << net.node_count() << " nodes, " << net.edge_count() << " edges, mean weight "
             << csv_number(stats.average_weight) << '\n';
        break;
    }
    case ExperimentKind::Simulate: {
        const bool sis = cfg.epidemic.model == PairwiseModel::SIS;
        const double t_max = cfg.epidemic.t_max ? *cfg.epidemic.t_max
                                                : (sis ? default_sis_horizon(cfg.epidemic)
                                                       : std::numeric_limits<double>::infinity());
        const EnsembleResult ens = run_ensemble(cfg.network, cfg.epidemic, cfg.ensemble, t_max);
        double t_end = t_max;
        if (!std::isfinite(t_end)) {
            t_end = 0.0;
            for (const auto& t : ens.runs)
                t_end = std::max(t_end, t.samples.back().time);
            if (!(t_end > 0.0))
                t_end = 1.0 / cfg.epidemic.params.gamma;
        }
        const Trajectory mean = ensemble_mean(ens.runs, uniform_grid(0.0, t_end, cfg.pairwise.grid_points));
        std::ostringstream os;
        write_ensemble_csv(os, mean);
        w.write("ensemble.csv", os.str());
        write_runs(w, cfg, ens);
        resolved["t_max"] = std::isfinite(t_max) ? ordered_json(t_max) : ordered_json("extinction");
        resolved["grid_end"] = t_end;
        results["runs"] = ens.runs.size();
        results["failures"] = failures_json(ens);
        results["final_mean_I_over_N"] = mean.samples.back().I / n;
        text << "simulated " << ens.runs.size() << " runs (" << ens.failures << " failed), final mean I/N "
             << csv_number(mean.samples.back().I / n) << '\n';
        break;
    }
    case ExperimentKind::Pairwise: {
        const double horizon = comparison_horizon(cfg.network, cfg.epidemic, cfg.pairwise);
        const PairwiseSolution sol = solve_pairwise(cfg.network, cfg.epidemic, cfg.pairwise, horizon);
        std::ostringstream os;
        write_pairwise_csv(os, sol, uniform_grid(0.0, horizon, cfg.pairwise.grid_points),
                           cfg.network.classes.weights);
        w.write("pairwise.csv", os.str());
        resolved["t_end"] = horizon;
        results["final_I_over_N"] = sol.final_state().I() / n;
        text << "pairwise " << to_string(cfg.epidemic.model) << " to t=" << csv_number(horizon) << ", final I/N "
             << csv_number(sol.final_state().I() / n) << '\n';
        break;
    }
    case ExperimentKind::Compare: {
        const ComparisonReport r = compare_models(cfg.network, cfg.epidemic, cfg.ensemble, cfg.pairwise);
        std::ostringstream ens, pw;
        write_ensemble_csv(ens, r.ensemble_mean);
        write_pairwise_csv(pw, r.pairwise, r.time_grid, cfg.network.classes.weights);
        w.write("ensemble.csv", ens.str());
        w.write("pairwise.csv", pw.str());
        w.write("comparison.csv", comparison_csv(r));
        resolved["t_end"] = r.time_grid.back();
        results["runs"] = r.runs;
        results["max_discrepancy"] = r.max_discrepancy;
        text << "max |simulation - pairwise| I/N = " << csv_number(r.max_discrepancy) << " over " << r.runs
             << " runs\n";
        break;
    }
    case ExperimentKind::R0: {
        std::ostringstream os;
        os << kThresholdCsvHeader << '\n';
        for (const auto& report : compute_thresholds(cfg)) {
            const std::string line = threshold_csv_line(report);
            os << line << '\n';
            text << line << '\n';
        }
        w.write("thresholds.csv", os.str());
        break;
    }
    case ExperimentKind::Steady: {
        const ClosureKind closure = resolve_closure(cfg.network, cfg.pairwise).kind;
        const auto points =
            sweep_endemic(cfg.network.classes, cfg.steady_taus, cfg.epidemic.params.gamma, closure, n);
        std::ostringstream os;
        write_sweep_csv(os, points);
        w.write("sweep.csv", os.str());
        std::size_t converged = 0;
        for (const auto& p : points)
            converged += p.converged ? 1 : 0;
        results["points"] = points.size();
        results["converged"] = converged;
        resolved["closure"] = std::string(to_string(closure));
        text << "steady sweep: " << converged << " of " << points.size() << " points converged\n";
        break;
    }
    case ExperimentKind::Figure:
        break;
    }

    ordered_json manifest = manifest_header();
    manifest["kind"] = std::string(to_string(kind));
    manifest["config"] = ordered_json::parse(config_to_json(cfg));
    resolved["closure"] = std::string(to_string(resolve_closure(cfg.network, cfg.pairwise).kind));
    resolved["grid_points"] = cfg.pairwise.grid_points;
    manifest["resolved"] = resolved;
    manifest["results"] = results;
    ordered_json files = ordered_json::array();
    for (const auto& f : w.summary.files)
        files.push_back(f.filename().generic_string() == f.generic_string()
                            ? f.generic_string()
                            : std::filesystem::relative(f, cfg.output).generic_string());
    manifest["files"] = files;
    w.write("manifest.json", manifest.dump(2) + "\n");
    w.summary.summary = text.str();
    return w.summary;
}

} // namespace epinet
