#include "epinet/network.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "epinet/errors.hpp"

namespace epinet {

WeightedNetwork::WeightedNetwork(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges))
{
    if (node_count_ > std::numeric_limits<NodeId>::max())
        throw InvalidArgument("network: too many nodes");

    offsets_.assign(node_count_ + 1, 0);
    for (const Edge& e : edges_) {
        if (e.u >= node_count_ || e.v >= node_count_)
            throw InvalidArgument("network: edge endpoint out of range");
        if (e.u == e.v)
            throw InvalidArgument("network: self-loop at node " + std::to_string(e.u));
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < node_count_; ++i)
        offsets_[i + 1] += offsets_[i];

    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
        adjacency_[cursor[e.u]++] = Neighbor{e.v, e.cls};
        adjacency_[cursor[e.v]++] = Neighbor{e.u, e.cls};
    }

    for (std::size_t u = 0; u < node_count_; ++u) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
        std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node == b.node; });
        if (dup != last)
            throw InvalidArgument("network: parallel edge between " + std::to_string(u) + " and " +
                                  std::to_string(dup->node));
    }
}

bool WeightedNetwork::has_edge(NodeId u, NodeId v) const
{
    if (u >= node_count_ || v >= node_count_)
        return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), Neighbor{v, 0},
                              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

bool WeightedNetwork::is_weighted() const
{
    return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.cls == kUnweighted; });
}

std::size_t WeightedNetwork::class_count() const
{
    std::size_t m = 0;
    for (const Edge& e : edges_) {
        if (e.cls == kUnweighted)
            return 0;
        m = std::max<std::size_t>(m, e.cls + 1);
    }
    return m;
}

WeightedNetwork WeightedNetwork::with_classes(std::span<const ClassIndex> classes) const
{
    if (classes.size() != edges_.size())
        throw InvalidArgument("network: one class per edge required");
    std::vector<Edge> relabelled = edges_;
    for (std::size_t i = 0; i < relabelled.size(); ++i)
        relabelled[i].cls = classes[i];
    return WeightedNetwork(node_count_, std::move(relabelled));
}

std::vector<std::uint32_t> class_degrees(const WeightedNetwork& net, ClassIndex m)
{
    std::vector<std::uint32_t> deg(net.node_count(), 0);
    for (const Edge& e : net.edges()) {
        if (e.cls == m) {
            ++deg[e.u];
            ++deg[e.v];
        }
    }
    return deg;
}

NetworkStats network_stats(const WeightedNetwork& net, const WeightClasses& wc)
{
    if (net.node_count() == 0)
        throw InvalidArgument("network_stats: empty network");

    NetworkStats stats;
    for (NodeId u = 0; u < net.node_count(); ++u) {
        const std::size_t d = net.degree(u);
        if (stats.degree_histogram.size() <= d)
            stats.degree_histogram.resize(d + 1, 0);
        ++stats.degree_histogram[d];
    }

    const std::size_t m_count = wc.size();
    stats.class_edge_counts.assign(m_count, 0);
    for (const Edge& e : net.edges()) {
        if (e.cls >= m_count)
            throw InvalidArgument("network_stats: edge class outside the weight alphabet");
        ++stats.class_edge_counts[e.cls];
    }

    stats.class_degree_histograms.resize(m_count);
    for (ClassIndex m = 0; m < m_count; ++m) {
        auto& hist = stats.class_degree_histograms[m];
        for (std::uint32_t d : class_degrees(net, m)) {
            if (hist.size() <= d)
                hist.resize(d + 1, 0);
            ++hist[d];
        }
    }

    double weighted = 0.0;
    for (std::size_t m = 0; m < m_count; ++m)
        weighted += static_cast<double>(stats.class_edge_counts[m]) * wc.weights[m];
    stats.average_weight = net.edge_count() > 0 ? weighted / static_cast<double>(net.edge_count()) : 0.0;
    return stats;
}

void write_edge_list(std::ostream& os, const WeightedNetwork& net, const WeightClasses& wc)
{
    if (!net.is_weighted())
        throw InvalidArgument("write_edge_list: network has no weight classes assigned");
    if (net.class_count() > wc.size())
        throw InvalidArgument("write_edge_list: edge class outside the weight alphabet");

    std::ostringstream header;
    header << std::setprecision(17) << "# N=" << net.node_count() << " M=" << wc.size() << " weights=";
    for (std::size_t m = 0; m < wc.size(); ++m)
        header << (m ? "," : "") << wc.weights[m];
    header << " mode=" << to_string(wc.mode) << '\n';
    os << header.str();
    for (const Edge& e : net.edges())
        os << e.u << ' ' << e.v << ' ' << e.cls << '\n';
}

namespace {

std::string header_field(const std::string& header, const std::string& key)
{
    std::istringstream tokens(header);
    std::string token;
    while (tokens >> token) {
        if (token.rfind(key + "=", 0) == 0)
            return token.substr(key.size() + 1);
    }
    throw InvalidArgument("edge list header lacks field '" + key + "'");
}

} // namespace

EdgeListFile read_edge_list(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header) || header.rfind("#", 0) != 0)
        throw InvalidArgument("edge list: missing '# N=...' header line");

    EdgeListFile file;
    std::size_t n = 0;
    std::size_t m = 0;
    try {
        n = std::stoull(header_field(header, "N"));
        m = std::stoull(header_field(header, "M"));
        std::istringstream ws(header_field(header, "weights"));
        std::string item;
        while (std::getline(ws, item, ','))
            file.weights.push_back(std::stod(item));
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const InvalidArgument*>(&e))
            throw;
        throw InvalidArgument(std::string("edge list: malformed header: ") + e.what());
    }
    file.mode = weight_mode_from_string(header_field(header, "mode"));
    if (file.weights.size() != m)
        throw InvalidArgument("edge list: M does not match the number of weights");

    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        long long u = -1, v = -1, c = -1;
        const bool parsed = static_cast<bool>(ls >> u >> v >> c) && (ls >> std::ws).eof();
        if (!parsed || u < 0 || v < 0 || c < 0 || static_cast<std::size_t>(c) >= m)
            throw InvalidArgument("edge list: bad edge on line " + std::to_string(line_no));
        edges.push_back(Edge{static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<ClassIndex>(c)});
    }
    file.network = WeightedNetwork(n, std::move(edges));
    return file;
}

} // namespace epinet
