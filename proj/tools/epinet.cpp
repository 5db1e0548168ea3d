// Command line front end: epinet <command> --config <file> [--seed N] [--out DIR]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "epinet/config.hpp"
#include "epinet/errors.hpp"
#include "epinet/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Args {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

int run(epinet::ExperimentKind kind, const Args& args)
{
    epinet::ExperimentConfig cfg = epinet::load_config(args.config);
    if (cfg.kind && *cfg.kind != kind)
        throw epinet::ConfigError("kind", "config is for '" + std::string(epinet::to_string(*cfg.kind)) +
                                              "' but the command is '" + std::string(epinet::to_string(kind)) + "'");
    cfg.kind = kind;
    if (kind == epinet::ExperimentKind::Figure && cfg.figure.empty())
        throw epinet::ConfigError("figure", "required for the figure command");
    if (args.seed)
        cfg.ensemble.seed = *args.seed;
    if (args.out)
        cfg.output = *args.out;
    const epinet::ExperimentSummary summary = epinet::run_experiment(cfg);
    std::cout << summary.summary;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Epidemics on weighted networks: simulation, pairwise models and thresholds"};
    app.require_subcommand(1);

    Args args;
    const std::pair<const char*, epinet::ExperimentKind> commands[] = {
        {"generate", epinet::ExperimentKind::Generate},
        {"simulate", epinet::ExperimentKind::Simulate},
        {"pairwise", epinet::ExperimentKind::Pairwise},
        {"compare", epinet::ExperimentKind::Compare},
        {"r0", epinet::ExperimentKind::R0},
        {"steady", epinet::ExperimentKind::Steady},
        {"figure", epinet::ExperimentKind::Figure},
    };
    const char* help[] = {
        "Generate a weighted network and write its edge list",
        "Run a stochastic simulation ensemble",
        "Integrate the pairwise model",
        "Compare the simulation ensemble mean with the pairwise model",
        "Evaluate epidemic thresholds (one CSV line each)",
        "Sweep SIS endemic steady states over tau",
        "Reproduce every curve of a figure",
    };
    std::vector<std::pair<CLI::App*, epinet::ExperimentKind>> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("--config", args.config, "JSON experiment configuration")->required();
        sub->add_option("--seed", args.seed, "Master seed (overrides ensemble.seed)");
        sub->add_option("--out", args.out, "Output directory (overrides output)");
        subs.emplace_back(sub, commands[i].second);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        for (const auto& [sub, kind] : subs)
            if (sub->parsed())
                return run(kind, args);
    } catch (const epinet::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const epinet::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const epinet::GenerationError& e) {
        std::cerr << "network generation failed: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}
