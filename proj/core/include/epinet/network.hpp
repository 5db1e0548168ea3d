#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "epinet/weights.hpp"

namespace epinet {

using NodeId = std::uint32_t;
using ClassIndex = std::uint32_t;

/// Class index carried by edges of a network that has no weights yet.
inline constexpr ClassIndex kUnweighted = std::numeric_limits<ClassIndex>::max();

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    ClassIndex cls = kUnweighted;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node = 0;
    ClassIndex cls = kUnweighted;
};

/// Undirected simple graph whose edges carry a weight-class index.
///
/// Construction validates simplicity (no self-loops, no parallel edges) and
/// builds a CSR adjacency in which each edge appears once from each endpoint
/// with the same class, so the graph is symmetric by construction.
class WeightedNetwork {
public:
    WeightedNetwork() = default;
    WeightedNetwork(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Neighbor> neighbors(NodeId u) const
    {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

    bool has_edge(NodeId u, NodeId v) const;

    /// True when no edge carries the kUnweighted sentinel.
    bool is_weighted() const;

    /// Largest class index in use plus one (0 for unweighted or empty graphs).
    std::size_t class_count() const;

    /// Same topology with edge i relabelled to classes[i].
    WeightedNetwork with_classes(std::span<const ClassIndex> classes) const;

    friend bool operator==(const WeightedNetwork& a, const WeightedNetwork& b)
    {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

struct NetworkStats {
    /// degree_histogram[d] = number of nodes of degree d.
    std::vector<std::size_t> degree_histogram;
    /// class_degree_histograms[m][d] = number of nodes with d edges of class m.
    std::vector<std::vector<std::size_t>> class_degree_histograms;
    std::vector<std::size_t> class_edge_counts;
    double average_weight = 0.0;
};

NetworkStats network_stats(const WeightedNetwork& net, const WeightClasses& wc);

/// Number of class-m edges incident to every node.
std::vector<std::uint32_t> class_degrees(const WeightedNetwork& net, ClassIndex m);

/// Edge-list file contents: the header fields plus the network itself.
struct EdgeListFile {
    WeightMode mode = WeightMode::Random;
    std::vector<double> weights;
    WeightedNetwork network;
};

/// Writes `# N=<n> M=<m> weights=<w1,...> mode=<random|fixed>` followed by
/// one `u v class_index` line per edge (0-based nodes and classes). Weights
/// are printed with 17 significant digits so reading them back is exact.
void write_edge_list(std::ostream& os, const WeightedNetwork& net, const WeightClasses& wc);
EdgeListFile read_edge_list(std::istream& is);

} // namespace epinet
