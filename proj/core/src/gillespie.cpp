#include "epinet/gillespie.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "epinet/errors.hpp"

namespace epinet {

void EpidemicParams::validate() const
{
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw InvalidArgument("epidemic parameters: tau must be finite and >= 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("epidemic parameters: gamma must be finite and > 0");
}

namespace {

constexpr int idx(NodeStatus s) { return static_cast<int>(s); }

} // namespace

GillespieSimulator::GillespieSimulator(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                                       Dynamics dynamics, std::uint64_t seed, SimulationOptions options)
    : net_(&net),
      weights_(wc.weights),
      params_(params),
      dynamics_(dynamics),
      options_(options),
      rng_(make_stream(seed, 0)),
      seed_(seed),
      classes_(wc.size())
{
    params_.validate();
    if (net.node_count() == 0)
        throw InvalidArgument("simulation: empty network");
    if (!net.is_weighted())
        throw InvalidArgument("simulation: network has no weight classes assigned");
    if (net.class_count() > classes_)
        throw InvalidArgument("simulation: edge class outside the weight alphabet");
    if (classes_ == 0)
        throw InvalidArgument("simulation: empty weight alphabet");

    const std::size_t n = net.node_count();
    status_.assign(n, NodeStatus::S);
    infected_neighbors_.assign(n * classes_, 0);
    rate_.assign(n, 0.0);
    tree_.assign(n + 1, 0.0);
    infected_pos_.assign(n, std::numeric_limits<std::size_t>::max());
    counts_ = {static_cast<std::int64_t>(n), 0, 0};

    class_edges_.assign(classes_, 0);
    for (const Edge& e : net.edges())
        ++class_edges_[e.cls];
    pairs_.assign(classes_, PairCounts{});
    for (std::size_t m = 0; m < classes_; ++m)
        pairs_[m][0][0] = 2 * class_edges_[m];
}

double GillespieSimulator::node_pressure(NodeId u) const
{
    double p = 0.0;
    const std::uint32_t* cnt = infected_neighbors_.data() + static_cast<std::size_t>(u) * classes_;
    for (std::size_t m = 0; m < classes_; ++m)
        p += weights_[m] * static_cast<double>(cnt[m]);
    return params_.tau * p;
}

void GillespieSimulator::set_rate(NodeId u, double value)
{
    const double delta = value - rate_[u];
    if (delta == 0.0)
        return;
    if ((rate_[u] > 0.0) != (value > 0.0))
        at_risk_ += value > 0.0 ? 1 : -1;
    rate_[u] = value;
    for (std::size_t i = static_cast<std::size_t>(u) + 1; i < tree_.size(); i += i & (~i + 1))
        tree_[i] += delta;
}

void GillespieSimulator::rebuild_tree()
{
    const std::size_t n = rate_.size();
    for (std::size_t i = 1; i <= n; ++i)
        tree_[i] = rate_[i - 1];
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t parent = i + (i & (~i + 1));
        if (parent <= n)
            tree_[parent] += tree_[i];
    }
}

std::size_t GillespieSimulator::find_by_cumulative(double target) const
{
    const std::size_t n = rate_.size();
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 <= n)
        step *= 2;
    for (; step > 0; step /= 2) {
        if (pos + step <= n && tree_[pos + step] <= target) {
            pos += step;
            target -= tree_[pos];
        }
    }
    return pos < n ? pos : n - 1;
}

double GillespieSimulator::infection_rate() const
{
    if (at_risk_ == 0)
        return 0.0;
    // Fenwick prefix sum over all nodes
    double total = 0.0;
    for (std::size_t i = rate_.size(); i > 0; i -= i & (~i + 1))
        total += tree_[i];
    return total > 0.0 ? total : 0.0;
}

double GillespieSimulator::total_rate() const
{
    return infection_rate() + params_.gamma * static_cast<double>(counts_[idx(NodeStatus::I)]);
}

double GillespieSimulator::recompute_total_rate() const
{
    double total = 0.0;
    for (NodeId u = 0; u < net_->node_count(); ++u) {
        if (status_[u] != NodeStatus::S)
            continue;
        double p = 0.0;
        for (const Neighbor& nb : net_->neighbors(u))
            if (status_[nb.node] == NodeStatus::I)
                p += weights_[nb.cls];
        total += params_.tau * p;
    }
    return total + params_.gamma * static_cast<double>(counts_[idx(NodeStatus::I)]);
}

std::vector<PairCounts> GillespieSimulator::recompute_pair_counts() const
{
    std::vector<PairCounts> pairs(classes_, PairCounts{});
    for (const Edge& e : net_->edges()) {
        const int a = idx(status_[e.u]);
        const int b = idx(status_[e.v]);
        ++pairs[e.cls][a][b];
        ++pairs[e.cls][b][a];
    }
    return pairs;
}

void GillespieSimulator::check_conservation() const
{
    const auto n = static_cast<std::int64_t>(net_->node_count());
    if (counts_[0] + counts_[1] + counts_[2] != n)
        throw std::logic_error("simulation: S+I+R != N after event " + std::to_string(events_));
    for (std::size_t m = 0; m < classes_; ++m) {
        std::int64_t sum = 0;
        for (const auto& row : pairs_[m])
            for (std::int64_t c : row)
                sum += c;
        if (sum != 2 * class_edges_[m])
            throw std::logic_error("simulation: pair sum of class " + std::to_string(m) + " drifted after event " +
                                   std::to_string(events_));
    }
}

void GillespieSimulator::audit() const
{
    check_conservation();
    if (recompute_pair_counts() != pairs_)
        throw std::logic_error("simulation: cached pair counts differ from recomputation");

    std::vector<std::uint32_t> fresh(infected_neighbors_.size(), 0);
    for (const Edge& e : net_->edges()) {
        if (status_[e.u] == NodeStatus::I)
            ++fresh[static_cast<std::size_t>(e.v) * classes_ + e.cls];
        if (status_[e.v] == NodeStatus::I)
            ++fresh[static_cast<std::size_t>(e.u) * classes_ + e.cls];
    }
    if (fresh != infected_neighbors_)
        throw std::logic_error("simulation: cached infected-neighbour counts differ from recomputation");
    for (NodeId u = 0; u < net_->node_count(); ++u) {
        const double expected = status_[u] == NodeStatus::S ? node_pressure(u) : 0.0;
        if (rate_[u] != expected)
            throw std::logic_error("simulation: cached rate of node " + std::to_string(u) + " is stale");
    }

    const double cached = total_rate();
    const double exact = recompute_total_rate();
    const double scale = std::max(std::abs(exact), 1e-300);
    if (std::abs(cached - exact) > 1e-9 * scale)
        throw std::logic_error("simulation: incremental total rate drifted beyond 1e-9 relative");
}

void GillespieSimulator::change_status(NodeId u, NodeStatus to)
{
    const NodeStatus from = status_[u];
    const int a = idx(from);
    const int b = idx(to);
    const bool was_infected = from == NodeStatus::I;
    const bool now_infected = to == NodeStatus::I;

    for (const Neighbor& nb : net_->neighbors(u)) {
        const int c = idx(status_[nb.node]);
        PairCounts& pc = pairs_[nb.cls];
        --pc[a][c];
        --pc[c][a];
        ++pc[b][c];
        ++pc[c][b];
        if (was_infected != now_infected) {
            auto& cnt = infected_neighbors_[static_cast<std::size_t>(nb.node) * classes_ + nb.cls];
            cnt = now_infected ? cnt + 1 : cnt - 1;
            if (status_[nb.node] == NodeStatus::S)
                set_rate(nb.node, node_pressure(nb.node));
        }
    }

    status_[u] = to;
    --counts_[a];
    ++counts_[b];
    set_rate(u, to == NodeStatus::S ? node_pressure(u) : 0.0);

    if (now_infected) {
        infected_pos_[u] = infected_.size();
        infected_.push_back(u);
    } else if (was_infected) {
        const std::size_t pos = infected_pos_[u];
        const NodeId last = infected_.back();
        infected_[pos] = last;
        infected_pos_[last] = pos;
        infected_.pop_back();
        infected_pos_[u] = std::numeric_limits<std::size_t>::max();
    }
}

void GillespieSimulator::seed_random(double fraction)
{
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InvalidArgument("simulation: initial infected fraction must lie in (0, 1)");
    const std::size_t n = net_->node_count();
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    if (count == 0)
        throw InvalidArgument("simulation: initial infected fraction rounds to zero nodes");

    std::vector<NodeId> nodes(n);
    for (NodeId u = 0; u < n; ++u)
        nodes[u] = u;
    // partial Fisher-Yates: the first `count` slots become a uniform sample
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng_, n - i));
        std::swap(nodes[i], nodes[j]);
    }
    seed_nodes(std::span<const NodeId>(nodes.data(), count));
}

void GillespieSimulator::seed_nodes(std::span<const NodeId> nodes)
{
    for (NodeId u : nodes) {
        if (u >= net_->node_count())
            throw InvalidArgument("simulation: seed node out of range");
        if (status_[u] == NodeStatus::S)
            change_status(u, NodeStatus::I);
    }
}

double GillespieSimulator::sample_waiting_time()
{
    return exponential(rng_, total_rate());
}

bool GillespieSimulator::step(double t_max)
{
    const double infection = infection_rate();
    const double recovery = params_.gamma * static_cast<double>(counts_[idx(NodeStatus::I)]);
    const double total = infection + recovery;
    if (!(total > 0.0))
        return false;

    const double dt = exponential(rng_, total);
    if (time_ + dt > t_max)
        return false;
    time_ += dt;

    if (uniform01(rng_) * total < recovery || infection <= 0.0) {
        const NodeId u = infected_[static_cast<std::size_t>(uniform_index(rng_, infected_.size()))];
        change_status(u, dynamics_ == Dynamics::SIS ? NodeStatus::S : NodeStatus::R);
    } else {
        std::size_t u = find_by_cumulative(uniform01(rng_) * infection);
        if (!(rate_[u] > 0.0)) {
            // rounding put the target on a zero-rate slot; resync and redraw
            rebuild_tree();
            do {
                u = find_by_cumulative(uniform01(rng_) * infection_rate());
            } while (!(rate_[u] > 0.0));
        }
        change_status(static_cast<NodeId>(u), NodeStatus::I);
    }
    ++events_;

    if (options_.check_every_event)
        check_conservation();
    if (options_.audit_interval > 0 && events_ % options_.audit_interval == 0) {
        audit();
        rebuild_tree();
    }
    return true;
}

Trajectory GillespieSimulator::run(double t_max)
{
    if (!(t_max > time_))
        throw InvalidArgument("simulation: t_max must exceed the current time");
    Trajectory traj;
    traj.seed = seed_;
    const auto sample = [this] {
        return TrajectorySample{time_, static_cast<double>(counts_[0]), static_cast<double>(counts_[1]),
                                static_cast<double>(counts_[2])};
    };
    traj.samples.push_back(sample());
    const std::uint64_t start_events = events_;
    while (step(t_max))
        traj.samples.push_back(sample());
    if (std::isfinite(t_max) && traj.samples.back().time < t_max) {
        auto last = sample();
        last.time = t_max;
        traj.samples.push_back(last);
    }
    traj.events = events_ - start_events;
    return traj;
}

namespace {

Trajectory run_dynamics(Dynamics dynamics, const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                        double fraction, double t_max, std::uint64_t seed, SimulationOptions options)
{
    if (!(t_max > 0.0))
        throw InvalidArgument("simulation: t_max must be positive");
    GillespieSimulator sim(net, wc, params, dynamics, seed, options);
    sim.seed_random(fraction);
    return sim.run(t_max);
}

} // namespace

Trajectory run_sis(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                   double initial_infected_fraction, double t_max, std::uint64_t seed, SimulationOptions options)
{
    return run_dynamics(Dynamics::SIS, net, wc, params, initial_infected_fraction, t_max, seed, options);
}

Trajectory run_sir(const WeightedNetwork& net, const WeightClasses& wc, EpidemicParams params,
                   double initial_infected_fraction, double t_max, std::uint64_t seed, SimulationOptions options)
{
    return run_dynamics(Dynamics::SIR, net, wc, params, initial_infected_fraction, t_max, seed, options);
}

} // namespace epinet
