#pragma once

#include <cstdint>

#include "epinet/network.hpp"
#include "epinet/weights.hpp"

namespace epinet {

/// Maximum number of whole-pairing restarts before generation gives up.
inline constexpr int kMaxGenerationRestarts = 500;

/// Uniform-ish random k-regular simple graph by stub matching.
/// All edges carry kUnweighted.
WeightedNetwork build_regular_graph(std::size_t n, int k, std::uint64_t seed);

/// G(n, p) with p = mean_degree / (n - 1). All edges carry kUnweighted.
WeightedNetwork build_erdos_renyi(std::size_t n, double mean_degree, std::uint64_t seed);

/// Relabels each edge independently with class i with probability probs[i].
WeightedNetwork assign_weights_random(const WeightedNetwork& net, const WeightClasses& wc, std::uint64_t seed);

/// Simple graph in which every node has exactly counts[i] edges of class i.
WeightedNetwork build_fixed_weight_network(std::size_t n, const WeightClasses& wc, std::uint64_t seed);

/// Homogeneous network with weights laid out according to wc.mode: a
/// wc.degree-regular graph relabelled at random, or the fixed construction.
WeightedNetwork build_weighted_network(std::size_t n, const WeightClasses& wc, std::uint64_t seed);

} // namespace epinet
