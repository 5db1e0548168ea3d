#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "epinet/network.hpp"
#include "epinet/rng.hpp"
#include "epinet/trajectory.hpp"
#include "epinet/weights.hpp"

namespace epinet {

/// Per-unit-weight transmission rate and recovery rate.
struct EpidemicParams {
    double tau = 0.0;
    double gamma = 1.0;

    void validate() const;
};

enum class Dynamics { SIS, SIR };

enum class NodeStatus : std::uint8_t { S = 0, I = 1, R = 2 };

struct SimulationOptions {
    /// Every this many events the cached rates and pair counts are compared
    /// against a full recomputation (0 disables the audit).
    std::uint64_t audit_interval = 10'000;
    /// Check S+I+R = N and the per-class pair sums after every event.
    bool check_every_event = false;
};

/// Doubly counted ordered pair counts of one weight class, indexed by
/// [status][status]. Sum over all nine entries is twice the class edge count.
using PairCounts = std::array<std::array<std::int64_t, 3>, 3>;

/// Exact continuous-time simulation of SIS/SIR dynamics on a weighted network.
///
/// A susceptible node u is infected at rate tau * sum of w(edge) over its
/// edges to infected neighbours; infected nodes recover at rate gamma (back
/// to S for SIS, to R for SIR). Per-node infection rates live in a Fenwick
/// tree so an event costs O(degree * log N).
class GillespieSimulator {
public:
    GillespieSimulator(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params, Dynamics dynamics,
                       std::uint64_t seed, SimulationOptions options = {});

    /// Infects round(fraction * N) nodes chosen uniformly without replacement.
    void seed_random(double fraction);
    void seed_nodes(std::span<const NodeId> nodes);

    /// Draws the next waiting time and executes one event. Returns false,
    /// leaving the state unchanged, when no event fits before t_max or the
    /// total rate is zero.
    bool step(double t_max);

    /// Runs until t_max or until no event is possible, recording every event.
    Trajectory run(double t_max);

    double time() const noexcept { return time_; }
    std::uint64_t events() const noexcept { return events_; }
    std::int64_t count(NodeStatus s) const noexcept { return counts_[static_cast<int>(s)]; }
    NodeStatus status(NodeId u) const { return status_[u]; }
    const std::vector<PairCounts>& pair_counts() const noexcept { return pairs_; }

    double infection_rate() const;
    double total_rate() const;

    /// Quantities recomputed from scratch, for audits and tests.
    double recompute_total_rate() const;
    std::vector<PairCounts> recompute_pair_counts() const;

    /// Full consistency audit; throws std::logic_error on mismatch.
    void audit() const;
    /// O(M) check of S+I+R = N and the per-class pair sums.
    void check_conservation() const;

    /// A waiting time drawn from Exp(total_rate()) without changing state.
    double sample_waiting_time();

private:
    double node_pressure(NodeId u) const;
    void set_rate(NodeId u, double value);
    void rebuild_tree();
    std::size_t find_by_cumulative(double target) const;
    void change_status(NodeId u, NodeStatus to);

    const WeightedNetwork* net_;
    std::vector<double> weights_;
    EpidemicParams params_;
    Dynamics dynamics_;
    SimulationOptions options_;
    Rng rng_;
    std::uint64_t seed_;

    std::size_t classes_;
    std::vector<NodeStatus> status_;
    std::vector<std::uint32_t> infected_neighbors_;  // [node * classes_ + m]
    std::vector<double> rate_;                      // infection rate of susceptible nodes, 0 otherwise
    std::vector<double> tree_;                      // Fenwick tree over rate_
    std::vector<NodeId> infected_;
    std::vector<std::size_t> infected_pos_;
    std::int64_t at_risk_ = 0;                      // susceptible nodes with a positive rate
    std::array<std::int64_t, 3> counts_{};
    std::vector<PairCounts> pairs_;
    std::vector<std::int64_t> class_edges_;
    double time_ = 0.0;
    std::uint64_t events_ = 0;
};

Trajectory run_sis(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                   double initial_infected_fraction, double t_max, std::uint64_t seed, SimulationOptions options = {});

Trajectory run_sir(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                   double initial_infected_fraction, double t_max, std::uint64_t seed, SimulationOptions options = {});

} // namespace epinet
