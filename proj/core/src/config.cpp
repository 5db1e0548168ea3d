#include "epinet/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace epinet {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string index_path(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

std::string join(const std::string& parent, std::string_view key)
{
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

double get_double(const json& j, const std::string& path)
{
    if (!j.is_number())
        throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ConfigError(path, "expected a finite number");
    return v;
}

std::uint64_t get_unsigned(const json& j, const std::string& path)
{
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError(path, "expected a non-negative integer");
}

std::string get_string(const json& j, const std::string& path)
{
    if (!j.is_string())
        throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path)
{
    if (!j.is_boolean())
        throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

const json& get_object(const json& j, const std::string& path)
{
    if (!j.is_object())
        throw ConfigError(path, "expected an object");
    return j;
}

const json& get_array(const json& j, const std::string& path)
{
    if (!j.is_array())
        throw ConfigError(path, "expected an array");
    return j;
}

std::vector<double> get_doubles(const json& j, const std::string& path)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < get_array(j, path).size(); ++i)
        out.push_back(get_double(j[i], index_path(path, i)));
    return out;
}

template <typename T, typename F>
T convert(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
}

PairwiseModel model_from_string(std::string_view text)
{
    if (text == "SIS" || text == "sis")
        return PairwiseModel::SIS;
    if (text == "SIR" || text == "sir")
        return PairwiseModel::SIR;
    throw InvalidArgument("unknown model '" + std::string(text) + "' (expected SIS|SIR)");
}

Topology topology_from_string(std::string_view text)
{
    if (text == "regular")
        return Topology::Regular;
    if (text == "erdos_renyi")
        return Topology::ErdosRenyi;
    throw InvalidArgument("unknown topology '" + std::string(text) + "' (expected regular|erdos_renyi)");
}

std::string_view to_string(Topology topology)
{
    return topology == Topology::Regular ? "regular" : "erdos_renyi";
}

// Network keys seen in the file; the weight classes are assembled once all
// sections (and the preset) have been applied.
struct NetworkKeys {
    bool degree = false;
};

void parse_network(const json& j, ExperimentConfig& cfg, NetworkKeys& keys)
{
    const std::string base = "network";
    NetworkSpec& net = cfg.network;
    for (const auto& [key, value] : get_object(j, base).items()) {
        const std::string path = join(base, key);
        if (key == "nodes") {
            net.nodes = get_unsigned(value, path);
        } else if (key == "topology") {
            net.topology = convert<Topology>(path, [&] { return topology_from_string(get_string(value, path)); });
        } else if (key == "degree") {
            const auto k = get_unsigned(value, path);
            if (k > 1'000'000)
                throw ConfigError(path, "degree is unreasonably large");
            net.classes.degree = static_cast<int>(k);
            keys.degree = true;
        } else if (key == "mean_degree") {
            net.mean_degree = get_double(value, path);
        } else if (key == "mode") {
            net.classes.mode = convert<WeightMode>(path, [&] { return weight_mode_from_string(get_string(value, path)); });
        } else if (key == "weights") {
            net.classes.weights = get_doubles(value, path);
        } else if (key == "probs") {
            net.classes.probs = get_doubles(value, path);
        } else if (key == "counts") {
            net.classes.counts.clear();
            for (std::size_t i = 0; i < get_array(value, path).size(); ++i) {
                const auto c = get_unsigned(value[i], index_path(path, i));
                if (c > 1'000'000)
                    throw ConfigError(index_path(path, i), "count is unreasonably large");
                net.classes.counts.push_back(static_cast<int>(c));
            }
        } else {
            throw ConfigError(path, "unknown key");
        }
    }
}

void parse_epidemic(const json& j, ExperimentConfig& cfg)
{
    const std::string base = "epidemic";
    EpidemicSpec& epi = cfg.epidemic;
    for (const auto& [key, value] : get_object(j, base).items()) {
        const std::string path = join(base, key);
        if (key == "model")
            epi.model = convert<PairwiseModel>(path, [&] { return model_from_string(get_string(value, path)); });
        else if (key == "tau")
            epi.params.tau = get_double(value, path);
        else if (key == "gamma")
            epi.params.gamma = get_double(value, path);
        else if (key == "initial_infected_fraction")
            epi.initial_fraction = get_double(value, path);
        else if (key == "t_max")
            epi.t_max = value.is_null() ? std::nullopt : std::optional<double>(get_double(value, path));
        else
            throw ConfigError(path, "unknown key");
    }
}

void parse_ensemble(const json& j, ExperimentConfig& cfg)
{
    const std::string base = "ensemble";
    for (const auto& [key, value] : get_object(j, base).items()) {
        const std::string path = join(base, key);
        if (key == "runs") {
            cfg.ensemble.runs = get_unsigned(value, path);
        } else if (key == "seed") {
            cfg.ensemble.seed = get_unsigned(value, path);
        } else if (key == "threads") {
            const auto t = get_unsigned(value, path);
            if (t > 4096)
                throw ConfigError(path, "thread count is unreasonably large");
            cfg.ensemble.threads = static_cast<unsigned>(t);
        } else if (key == "write_runs") {
            cfg.ensemble.write_runs = get_bool(value, path);
        } else {
            throw ConfigError(path, "unknown key");
        }
    }
}

void parse_pairwise(const json& j, ExperimentConfig& cfg)
{
    const std::string base = "pairwise";
    for (const auto& [key, value] : get_object(j, base).items()) {
        const std::string path = join(base, key);
        if (key == "closure") {
            if (value.is_null())
                cfg.pairwise.closure.reset();
            else
                cfg.pairwise.closure =
                    convert<ClosureKind>(path, [&] { return closure_kind_from_string(get_string(value, path)); });
        } else if (key == "rel_tol") {
            cfg.pairwise.rel_tol = get_double(value, path);
        } else if (key == "abs_tol") {
            cfg.pairwise.abs_tol = get_double(value, path);
        } else if (key == "grid_points") {
            cfg.pairwise.grid_points = get_unsigned(value, path);
        } else {
            throw ConfigError(path, "unknown key");
        }
    }
}

void parse_steady(const json& j, ExperimentConfig& cfg)
{
    const std::string base = "steady";
    for (const auto& [key, value] : get_object(j, base).items()) {
        const std::string path = join(base, key);
        if (key == "taus")
            cfg.steady_taus = get_doubles(value, path);
        else
            throw ConfigError(path, "unknown key");
    }
}

bool is_figure_name(std::string_view name)
{
    for (auto f : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"})
        if (name == f)
            return true;
    return false;
}

void check_positive(double v, const std::string& path)
{
    if (!(v > 0.0))
        throw ConfigError(path, "must be positive");
}

void finalize_network(ExperimentConfig& cfg, const NetworkKeys& keys)
{
    NetworkSpec& net = cfg.network;
    WeightClasses& wc = net.classes;

    if (net.nodes < 2)
        throw ConfigError("network.nodes", "at least 2 nodes are required");
    if (net.nodes > (std::size_t{1} << 31))
        throw ConfigError("network.nodes", "too many nodes");
    if (wc.weights.empty())
        throw ConfigError("network.weights", "at least one weight is required");
    for (std::size_t i = 0; i < wc.weights.size(); ++i)
        check_positive(wc.weights[i], index_path("network.weights", i));

    if (wc.mode == WeightMode::Random) {
        wc.counts.clear();
        if (wc.probs.size() != wc.weights.size())
            throw ConfigError("network.probs", "must have one entry per weight");
        double total = 0.0;
        for (std::size_t i = 0; i < wc.probs.size(); ++i) {
            if (!(wc.probs[i] >= 0.0 && wc.probs[i] <= 1.0))
                throw ConfigError(index_path("network.probs", i), "must lie in [0, 1]");
            total += wc.probs[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError("network.probs", "must sum to 1");
    } else {
        wc.probs.clear();
        if (wc.counts.size() != wc.weights.size())
            throw ConfigError("network.counts", "must have one entry per weight");
        const int total = std::accumulate(wc.counts.begin(), wc.counts.end(), 0);
        if (keys.degree && wc.degree != total)
            throw ConfigError("network.degree", "must equal the sum of network.counts");
        wc.degree = total;
        if (net.topology != Topology::Regular)
            throw ConfigError("network.topology", "the fixed weight layout requires a regular topology");
        for (std::size_t i = 0; i < wc.counts.size(); ++i) {
            if ((net.nodes * static_cast<std::size_t>(wc.counts[i])) % 2 != 0)
                throw ConfigError(index_path("network.counts", i), "nodes * count must be even");
        }
    }

    if (net.topology == Topology::ErdosRenyi) {
        if (!(net.mean_degree > 0.0 && net.mean_degree <= static_cast<double>(net.nodes - 1)))
            throw ConfigError("network.mean_degree", "must lie in (0, nodes - 1]");
        wc.degree = std::max(1, static_cast<int>(std::lround(net.mean_degree)));
    } else {
        net.mean_degree = 0.0;
        if (wc.degree < 1)
            throw ConfigError("network.degree", "must be at least 1");
        if (static_cast<std::size_t>(wc.degree) >= net.nodes)
            throw ConfigError("network.degree", "must be smaller than network.nodes");
        if ((net.nodes * static_cast<std::size_t>(wc.degree)) % 2 != 0)
            throw ConfigError("network.degree", "nodes * degree must be even");
    }
    convert<int>("network", [&] {
        wc.validate();
        return 0;
    });
}

void finalize(ExperimentConfig& cfg, const NetworkKeys& keys)
{
    if (cfg.has_network)
        finalize_network(cfg, keys);
    else if (cfg.kind && *cfg.kind != ExperimentKind::Figure)
        throw ConfigError("network", "a network section or a preset is required");

    EpidemicSpec& epi = cfg.epidemic;
    if (!(epi.params.tau >= 0.0))
        throw ConfigError("epidemic.tau", "must be non-negative");
    check_positive(epi.params.gamma, "epidemic.gamma");
    if (!(epi.initial_fraction > 0.0 && epi.initial_fraction < 1.0))
        throw ConfigError("epidemic.initial_infected_fraction", "must lie in (0, 1)");
    if (cfg.has_network && std::lround(epi.initial_fraction * static_cast<double>(cfg.network.nodes)) < 1)
        throw ConfigError("epidemic.initial_infected_fraction", "infects no node at this network size");
    if (epi.t_max)
        check_positive(*epi.t_max, "epidemic.t_max");

    if (cfg.ensemble.runs < 1)
        throw ConfigError("ensemble.runs", "must be at least 1");
    check_positive(cfg.pairwise.rel_tol, "pairwise.rel_tol");
    check_positive(cfg.pairwise.abs_tol, "pairwise.abs_tol");
    if (cfg.pairwise.grid_points < 2)
        throw ConfigError("pairwise.grid_points", "must be at least 2");

    for (std::size_t i = 0; i < cfg.steady_taus.size(); ++i) {
        const std::string path = index_path("steady.taus", i);
        if (!(cfg.steady_taus[i] >= 0.0))
            throw ConfigError(path, "must be non-negative");
        if (i > 0 && !(cfg.steady_taus[i] > cfg.steady_taus[i - 1]))
            throw ConfigError(path, "taus must be strictly ascending");
    }
    if (!cfg.figure.empty() && !is_figure_name(cfg.figure))
        throw ConfigError("figure", "unknown figure '" + cfg.figure + "' (expected fig1..fig7)");

    if (cfg.kind == ExperimentKind::Figure && cfg.figure.empty())
        throw ConfigError("figure", "required for figure experiments");
    if (cfg.kind == ExperimentKind::Steady && cfg.steady_taus.empty())
        cfg.steady_taus = {0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    const bool needs_pairwise = cfg.kind == ExperimentKind::Pairwise || cfg.kind == ExperimentKind::Compare ||
                                cfg.kind == ExperimentKind::Steady;
    if (needs_pairwise && cfg.network.topology == Topology::ErdosRenyi &&
        cfg.network.mean_degree != std::round(cfg.network.mean_degree))
        throw ConfigError("network.mean_degree", "pairwise models need an integer mean degree");
    if (cfg.kind == ExperimentKind::Steady && epi.model != PairwiseModel::SIS)
        throw ConfigError("epidemic.model", "steady-state sweeps exist only for SIS");
}

} // namespace

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::Generate: return "generate";
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Pairwise: return "pairwise";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::R0: return "r0";
    case ExperimentKind::Steady: return "steady";
    case ExperimentKind::Figure: return "figure";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view text)
{
    if (text == "generate")
        return ExperimentKind::Generate;
    if (text == "simulate")
        return ExperimentKind::Simulate;
    if (text == "pairwise")
        return ExperimentKind::Pairwise;
    if (text == "compare")
        return ExperimentKind::Compare;
    if (text == "r0")
        return ExperimentKind::R0;
    if (text == "steady" || text == "steady-sweep")
        return ExperimentKind::Steady;
    if (text == "figure" || text == "figure-preset")
        return ExperimentKind::Figure;
    throw InvalidArgument("unknown experiment kind '" + std::string(text) + "'");
}

ClosureKind closure_kind_from_string(std::string_view text)
{
    if (text == "classic")
        return ClosureKind::Classic;
    if (text == "modified")
        return ClosureKind::Modified;
    throw InvalidArgument("unknown closure '" + std::string(text) + "' (expected classic|modified)");
}

std::string_view to_string(ClosureKind kind)
{
    return kind == ClosureKind::Classic ? "classic" : "modified";
}

std::string_view to_string(PairwiseModel model)
{
    return model == PairwiseModel::SIS ? "SIS" : "SIR";
}

ThresholdKind threshold_kind_from_string(std::string_view text)
{
    for (auto kind : {ThresholdKind::R0Random, ThresholdKind::R0Fixed, ThresholdKind::RClassic,
                      ThresholdKind::RModified}) {
        if (text == to_string(kind))
            return kind;
    }
    throw InvalidArgument("unknown threshold '" + std::string(text) +
                          "' (expected R0_random|R0_fixed|R_classic|R_modified)");
}

void apply_preset(ExperimentConfig& cfg, std::string_view name)
{
    NetworkSpec& net = cfg.network;
    EpidemicSpec& epi = cfg.epidemic;
    net.nodes = 1000;
    net.topology = Topology::Regular;
    net.mean_degree = 0.0;
    epi.params = {1.0, 1.0};
    epi.initial_fraction = 0.05;

    const auto random = [&](int k, double w1, double p1, double w2) {
        net.classes = WeightClasses{WeightMode::Random, {w1, w2}, {p1, 1.0 - p1}, {}, k};
    };
    const auto fixed = [&](int k1, int k2, double w1, double w2) {
        net.classes = WeightClasses{WeightMode::Fixed, {w1, w2}, {}, {k1, k2}, k1 + k2};
    };

    if (name == "fig2-top") {
        random(5, 5.0, 0.2, 1.25);
    } else if (name == "fig2-bottom") {
        random(5, 0.5, 0.5, 1.5);
    } else if (name == "fig3-w2.5" || name == "fig3-w5" || name == "fig3-w10") {
        const double w1 = name == "fig3-w2.5" ? 2.5 : name == "fig3-w5" ? 5.0 : 10.0;
        random(5, w1, 0.05, (1.0 - 0.05 * w1) / 0.95);
    } else if (name == "fig3-inset") {
        random(10, 10.0, 0.05, 0.5 / 0.95);
        epi.params.tau = 0.5;
    } else if (name == "fig4-p0.01" || name == "fig4-p0.05" || name == "fig4-p0.09") {
        const double p1 = name == "fig4-p0.01" ? 0.01 : name == "fig4-p0.05" ? 0.05 : 0.09;
        random(10, 10.0, p1, (1.0 - 10.0 * p1) / (1.0 - p1));
        epi.params.tau = 0.5;
    } else if (name.starts_with("fig5-")) {
        const std::string_view rest = name.substr(5);
        if (rest == "top-random" || rest == "bottom-random")
            random(10, 10.0, 0.2, 1.25);
        else if (rest == "top-fixed" || rest == "bottom-fixed")
            fixed(2, 8, 10.0, 1.25);
        else
            throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
        epi.params.tau = rest.starts_with("top") ? 0.5 : 0.1;
    } else if (name.starts_with("fig6-k1-") && name.size() == 9 && name[8] >= '1' && name[8] <= '5') {
        const int k1 = name[8] - '0';
        fixed(k1, 6 - k1, 1.4, 0.8);
    } else {
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
    }
    cfg.preset = std::string(name);
}

ExperimentConfig parse_config(std::string_view json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    get_object(root, "");

    ExperimentConfig cfg;
    if (!root.contains("schema"))
        throw ConfigError("schema", "missing schema version");
    const auto schema = get_unsigned(root["schema"], "schema");
    if (schema != static_cast<std::uint64_t>(kConfigSchemaVersion))
        throw ConfigError("schema", "unsupported schema version " + std::to_string(schema));

    // The preset goes first so explicit sections override it.
    if (root.contains("preset"))
        apply_preset(cfg, get_string(root["preset"], "preset"));

    NetworkKeys keys;
    for (const auto& [key, value] : root.items()) {
        if (key == "schema" || key == "preset") {
            continue;
        } else if (key == "kind") {
            cfg.kind = convert<ExperimentKind>(key, [&] { return experiment_kind_from_string(get_string(value, key)); });
        } else if (key == "network") {
            parse_network(value, cfg, keys);
        } else if (key == "epidemic") {
            parse_epidemic(value, cfg);
        } else if (key == "ensemble") {
            parse_ensemble(value, cfg);
        } else if (key == "pairwise") {
            parse_pairwise(value, cfg);
        } else if (key == "thresholds") {
            cfg.thresholds.clear();
            for (std::size_t i = 0; i < get_array(value, key).size(); ++i) {
                const std::string path = index_path(key, i);
                cfg.thresholds.push_back(
                    convert<ThresholdKind>(path, [&] { return threshold_kind_from_string(get_string(value[i], path)); }));
            }
        } else if (key == "steady") {
            parse_steady(value, cfg);
        } else if (key == "figure") {
            cfg.figure = get_string(value, key);
        } else if (key == "output") {
            cfg.output = get_string(value, key);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    cfg.has_network = !cfg.preset.empty() || root.contains("network");
    finalize(cfg, keys);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("", "cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    const NetworkSpec& net = cfg.network;
    const WeightClasses& wc = net.classes;
    ordered_json j;
    j["schema"] = cfg.schema;
    j["kind"] = cfg.kind ? std::string(to_string(*cfg.kind)) : std::string();
    j["preset"] = cfg.preset;

    ordered_json network;
    network["nodes"] = net.nodes;
    network["topology"] = std::string(to_string(net.topology));
    network["degree"] = wc.degree;
    if (net.topology == Topology::ErdosRenyi)
        network["mean_degree"] = net.mean_degree;
    network["mode"] = std::string(to_string(wc.mode));
    network["weights"] = wc.weights;
    if (wc.mode == WeightMode::Random)
        network["probs"] = wc.probs;
    else
        network["counts"] = wc.counts;
    j["network"] = network;

    ordered_json epidemic;
    epidemic["model"] = std::string(to_string(cfg.epidemic.model));
    epidemic["tau"] = cfg.epidemic.params.tau;
    epidemic["gamma"] = cfg.epidemic.params.gamma;
    epidemic["initial_infected_fraction"] = cfg.epidemic.initial_fraction;
    epidemic["t_max"] = cfg.epidemic.t_max ? ordered_json(*cfg.epidemic.t_max) : ordered_json(nullptr);
    j["epidemic"] = epidemic;

    ordered_json ensemble;
    ensemble["runs"] = cfg.ensemble.runs;
    ensemble["seed"] = cfg.ensemble.seed;
    ensemble["threads"] = cfg.ensemble.threads;
    ensemble["write_runs"] = cfg.ensemble.write_runs;
    j["ensemble"] = ensemble;

    ordered_json pairwise;
    pairwise["closure"] =
        cfg.pairwise.closure ? ordered_json(std::string(to_string(*cfg.pairwise.closure))) : ordered_json(nullptr);
    pairwise["rel_tol"] = cfg.pairwise.rel_tol;
    pairwise["abs_tol"] = cfg.pairwise.abs_tol;
    pairwise["grid_points"] = cfg.pairwise.grid_points;
    j["pairwise"] = pairwise;

    ordered_json thresholds = ordered_json::array();
    for (auto kind : cfg.thresholds)
        thresholds.push_back(std::string(to_string(kind)));
    j["thresholds"] = thresholds;
    j["steady"] = ordered_json{{"taus", cfg.steady_taus}};
    j["figure"] = cfg.figure;
    j["output"] = cfg.output.generic_string();
    return j.dump(2);
}

} // namespace epinet
