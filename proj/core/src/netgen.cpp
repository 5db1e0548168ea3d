#include "epinet/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epinet/errors.hpp"
#include "epinet/rng.hpp"

namespace epinet {

namespace {

// Adjacency used while pairing. Degrees are small, so linear scans win.
using WorkingAdjacency = std::vector<std::vector<NodeId>>;

bool adjacent(const WorkingAdjacency& adj, NodeId u, NodeId v)
{
    const auto& a = adj[u];
    return std::find(a.begin(), a.end(), v) != a.end();
}

bool any_valid_pair(const std::vector<NodeId>& stubs, const WorkingAdjacency& adj)
{
    std::vector<NodeId> nodes(stubs);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (!adjacent(adj, nodes[i], nodes[j]))
                return true;
    return false;
}

// Pairs k stubs per node into a k-regular layer avoiding self-loops and any
// edge already present in adj (earlier layers included). Stub pairs are drawn
// uniformly among the remaining stubs and redrawn on conflict. Returns false
// when the remaining stubs cannot be completed, which triggers a restart.
bool pair_layer(std::size_t n, int k, ClassIndex cls, Rng& rng, WorkingAdjacency& adj, std::vector<Edge>& out)
{
    std::vector<NodeId> stubs;
    stubs.reserve(n * static_cast<std::size_t>(k));
    for (NodeId u = 0; u < n; ++u)
        for (int s = 0; s < k; ++s)
            stubs.push_back(u);

    std::size_t failures = 0;
    while (!stubs.empty()) {
        const auto i = static_cast<std::size_t>(uniform_index(rng, stubs.size()));
        auto j = static_cast<std::size_t>(uniform_index(rng, stubs.size() - 1));
        if (j >= i)
            ++j;
        const NodeId u = stubs[i];
        const NodeId v = stubs[j];
        if (u == v || adjacent(adj, u, v)) {
            if (++failures > 64 * stubs.size() + 256) {
                if (!any_valid_pair(stubs, adj))
                    return false;
                failures = 0;
            }
            continue;
        }
        failures = 0;
        adj[u].push_back(v);
        adj[v].push_back(u);
        out.push_back(Edge{std::min(u, v), std::max(u, v), cls});
        // remove the higher index first so the lower one stays valid
        for (std::size_t idx : {std::max(i, j), std::min(i, j)}) {
            stubs[idx] = stubs.back();
            stubs.pop_back();
        }
    }
    return true;
}

void check_layer_parity(std::size_t n, int k)
{
    if ((n * static_cast<std::size_t>(k)) % 2 != 0)
        throw InvalidArgument("N*k must be even (N=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

} // namespace

WeightedNetwork build_regular_graph(std::size_t n, int k, std::uint64_t seed)
{
    if (k < 1 || static_cast<std::size_t>(k) >= n)
        throw InvalidArgument("regular graph: need 1 <= k < N");
    check_layer_parity(n, k);

    Rng rng = make_stream(seed, 0);
    for (int attempt = 0; attempt <= kMaxGenerationRestarts; ++attempt) {
        WorkingAdjacency adj(n);
        std::vector<Edge> edges;
        edges.reserve(n * static_cast<std::size_t>(k) / 2);
        if (pair_layer(n, k, kUnweighted, rng, adj, edges))
            return WeightedNetwork(n, std::move(edges));
    }
    throw GenerationError("regular graph: stub matching failed after " + std::to_string(kMaxGenerationRestarts) +
                          " restarts");
}

WeightedNetwork build_erdos_renyi(std::size_t n, double mean_degree, std::uint64_t seed)
{
    if (n < 2)
        throw InvalidArgument("Erdos-Renyi: need at least two nodes");
    const double max_degree = static_cast<double>(n - 1);
    if (!(mean_degree > 0.0) || mean_degree > max_degree)
        throw InvalidArgument("Erdos-Renyi: need 0 < mean_degree <= N-1");

    const double p = mean_degree / max_degree;
    std::vector<Edge> edges;
    if (p >= 1.0) {
        for (NodeId v = 1; v < n; ++v)
            for (NodeId w = 0; w < v; ++w)
                edges.push_back(Edge{w, v, kUnweighted});
        return WeightedNetwork(n, std::move(edges));
    }

    // Batagelj-Brandes geometric skipping over the lower triangle
    Rng rng = make_stream(seed, 0);
    const double log_q = std::log1p(-p);
    long long v = 1;
    long long w = -1;
    const auto nn = static_cast<long long>(n);
    while (v < nn) {
        const double r = uniform01(rng);
        w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn)
            edges.push_back(Edge{static_cast<NodeId>(w), static_cast<NodeId>(v), kUnweighted});
    }
    return WeightedNetwork(n, std::move(edges));
}

WeightedNetwork assign_weights_random(const WeightedNetwork& net, const WeightClasses& wc, std::uint64_t seed)
{
    wc.validate();
    if (wc.mode != WeightMode::Random)
        throw InvalidArgument("assign_weights_random: weight classes must be in random mode");

    std::vector<double> cumulative(wc.size());
    double acc = 0.0;
    for (std::size_t m = 0; m < wc.size(); ++m) {
        acc += wc.probs[m];
        cumulative[m] = acc;
    }

    Rng rng = make_stream(seed, 1);
    std::vector<ClassIndex> classes(net.edge_count());
    for (auto& cls : classes) {
        const double u = uniform01(rng) * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end())
            --it;
        // skip zero-probability classes that share a cumulative value
        while (it != cumulative.begin() && wc.probs[static_cast<std::size_t>(it - cumulative.begin())] == 0.0)
            --it;
        cls = static_cast<ClassIndex>(it - cumulative.begin());
    }
    return net.with_classes(classes);
}

WeightedNetwork build_fixed_weight_network(std::size_t n, const WeightClasses& wc, std::uint64_t seed)
{
    wc.validate();
    if (wc.mode != WeightMode::Fixed)
        throw InvalidArgument("build_fixed_weight_network: weight classes must be in fixed mode");
    if (static_cast<std::size_t>(wc.degree) >= n)
        throw InvalidArgument("build_fixed_weight_network: need k < N");
    for (int k : wc.counts)
        check_layer_parity(n, k);

    Rng rng = make_stream(seed, 0);
    for (int attempt = 0; attempt <= kMaxGenerationRestarts; ++attempt) {
        WorkingAdjacency adj(n);
        std::vector<Edge> edges;
        edges.reserve(n * static_cast<std::size_t>(wc.degree) / 2);
        bool ok = true;
        for (ClassIndex m = 0; m < wc.size() && ok; ++m)
            ok = pair_layer(n, wc.counts[m], m, rng, adj, edges);
        if (ok)
            return WeightedNetwork(n, std::move(edges));
    }
    throw GenerationError("fixed-weight network: layered stub matching failed after " +
                          std::to_string(kMaxGenerationRestarts) + " restarts");
}

WeightedNetwork build_weighted_network(std::size_t n, const WeightClasses& wc, std::uint64_t seed)
{
    wc.validate();
    if (wc.mode == WeightMode::Fixed)
        return build_fixed_weight_network(n, wc, seed);
    return assign_weights_random(build_regular_graph(n, wc.degree, seed), wc, seed);
}

} // namespace epinet
