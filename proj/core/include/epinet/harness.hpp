#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "epinet/config.hpp"
#include "epinet/pairwise.hpp"
#include "epinet/trajectory.hpp"

namespace epinet {

/// Version tag recorded per module in every manifest.
inline constexpr std::string_view kModuleVersion = "1.0.0";

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Each index runs exactly once; exceptions are rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Network described by spec, generated from seed.
WeightedNetwork build_network(const NetworkSpec& spec, std::uint64_t seed);

/// Ensemble member i generates its network from derive_seed(seed, 2i) and
/// simulates from derive_seed(seed, 2i + 1), independent of scheduling.
std::uint64_t member_network_seed(std::uint64_t seed, std::size_t member);
std::uint64_t member_simulation_seed(std::uint64_t seed, std::size_t member);

struct EnsembleResult {
    std::vector<Trajectory> runs;       ///< successful runs, in member order
    std::vector<std::size_t> members;   ///< member index of each successful run
    std::size_t failures = 0;
    std::vector<std::string> failure_messages;
};

/// Independent simulations on freshly generated networks. Throws NumericError
/// when fewer than 90% of the runs succeed.
EnsembleResult run_ensemble(const NetworkSpec& network, const EpidemicSpec& epidemic, const EnsembleSpec& ensemble,
                            double t_max, SimulationOptions options = {});

Closure resolve_closure(const NetworkSpec& network, const PairwiseSpec& pairwise);

/// Pairwise ODE solution from the standard initial conditions.
PairwiseSolution solve_pairwise(const NetworkSpec& network, const EpidemicSpec& epidemic, const PairwiseSpec& pairwise,
                                double t_end);

/// Comparison horizon: the configured t_max, 15/gamma for SIS, or for SIR the
/// time at which the pairwise prevalence has fallen below 1e-4 after its peak.
double comparison_horizon(const NetworkSpec& network, const EpidemicSpec& epidemic, const PairwiseSpec& pairwise);

struct ComparisonReport {
    std::vector<double> time_grid;
    std::vector<double> simulation_prevalence;  ///< ensemble-mean I/N
    std::vector<double> pairwise_prevalence;    ///< pairwise ODE I/N
    double max_discrepancy = 0.0;
    std::size_t runs = 0;
    Trajectory ensemble_mean;
    PairwiseSolution pairwise;
};

ComparisonReport compare_models(const NetworkSpec& network, const EpidemicSpec& epidemic,
                                const EnsembleSpec& ensemble, const PairwiseSpec& pairwise);

struct EndemicEstimate {
    double mean_i_over_n = 0.0;  ///< over runs of the time-averaged I/N in the window
    double std_error = 0.0;
    std::size_t runs = 0;
    std::size_t extinct_runs = 0;
};

/// SIS endemic prevalence from simulation: each run is started like any other
/// ensemble member and its I/N is time-averaged over [t_from, t_to].
EndemicEstimate estimate_endemic_prevalence(const NetworkSpec& network, const EpidemicSpec& epidemic,
                                            const EnsembleSpec& ensemble, double t_from, double t_to);

/// Threshold reports requested by the configuration (or the defaults for its
/// weight mode).
std::vector<ThresholdReport> compute_thresholds(const ExperimentConfig& config);

struct ExperimentSummary {
    std::vector<std::filesystem::path> files;
    std::string summary;
};

/// Executes the configured experiment and writes its CSV artifacts plus
/// manifest.json into config.output. Deterministic for a fixed seed.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Serialised file writes for concurrent producers.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

} // namespace epinet
