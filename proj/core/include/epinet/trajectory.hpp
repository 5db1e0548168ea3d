#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace epinet {

struct TrajectorySample {
    double time = 0.0;
    double S = 0.0;
    double I = 0.0;
    double R = 0.0;
};

/// Time-stamped compartment counts. A single stochastic run stores integer
/// counts at every event; an ensemble mean stores averages on a grid.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::uint64_t events = 0;
    std::uint64_t seed = 0;
    std::size_t runs = 1;

    /// Value of the right-continuous step function at time t (the last
    /// sample with sample.time <= t; the first sample for earlier t).
    TrajectorySample at(double t) const;
};

/// Step-function sampling of every trajectory on the grid, then the
/// pointwise mean. Throws InvalidArgument on empty input.
Trajectory ensemble_mean(std::span<const Trajectory> trajectories, std::span<const double> time_grid);

/// n uniformly spaced points covering [t0, t1] inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// CSV `time,S,I,R`.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

/// CSV `time,mean_S,mean_I,mean_R,runs`.
void write_ensemble_csv(std::ostream& os, const Trajectory& mean);

} // namespace epinet
