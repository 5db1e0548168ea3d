#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epinet/errors.hpp"
#include "epinet/gillespie.hpp"
#include "epinet/pairwise.hpp"
#include "epinet/thresholds.hpp"
#include "epinet/weights.hpp"

namespace epinet {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid experiment configuration; `path()` names the offending field
/// (e.g. "network.weights[1]").
class ConfigError : public InvalidArgument {
public:
    ConfigError(std::string path, const std::string& message)
        : InvalidArgument(path.empty() ? message : path + ": " + message), path_(std::move(path))
    {
    }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class ExperimentKind { Generate, Simulate, Pairwise, Compare, R0, Steady, Figure };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view text);

enum class Topology { Regular, ErdosRenyi };

struct NetworkSpec {
    std::size_t nodes = 1000;
    Topology topology = Topology::Regular;
    double mean_degree = 0.0;  ///< Erdos-Renyi only
    WeightClasses classes;
};

struct EpidemicSpec {
    PairwiseModel model = PairwiseModel::SIS;
    EpidemicParams params{1.0, 1.0};
    double initial_fraction = 0.05;
    /// Unset: 15/gamma for SIS, until extinction for SIR.
    std::optional<double> t_max;
};

struct EnsembleSpec {
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;     ///< 0 = hardware concurrency
    bool write_runs = false;  ///< also write every event of every run
};

struct PairwiseSpec {
    std::optional<ClosureKind> closure;  ///< unset: classic for random weights, modified for fixed
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    std::size_t grid_points = 201;
};

struct ExperimentConfig {
    int schema = kConfigSchemaVersion;
    std::optional<ExperimentKind> kind;
    std::string preset;
    bool has_network = false;  ///< a network section or preset was given
    NetworkSpec network;
    EpidemicSpec epidemic;
    EnsembleSpec ensemble;
    PairwiseSpec pairwise;
    std::vector<ThresholdKind> thresholds;
    std::vector<double> steady_taus;
    std::string figure;
    std::filesystem::path output = ".";
};

/// Parses and validates a JSON configuration. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Resolved configuration as JSON text (stable key order), for manifests.
std::string config_to_json(const ExperimentConfig& config);

/// Network and epidemic settings of a named curve (e.g. "fig2-top",
/// "fig5-top-fixed", "fig6-k1-3"). Throws ConfigError for unknown names.
void apply_preset(ExperimentConfig& config, std::string_view name);

ClosureKind closure_kind_from_string(std::string_view text);
std::string_view to_string(ClosureKind kind);
std::string_view to_string(PairwiseModel model);
ThresholdKind threshold_kind_from_string(std::string_view text);

} // namespace epinet
