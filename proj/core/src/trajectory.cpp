#include "epinet/trajectory.hpp"

#include <algorithm>
#include <ostream>

#include "epinet/csv.hpp"
#include "epinet/errors.hpp"

namespace epinet {

TrajectorySample Trajectory::at(double t) const
{
    if (samples.empty())
        throw InvalidArgument("trajectory: no samples");
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double value, const TrajectorySample& s) { return value < s.time; });
    if (it == samples.begin())
        return samples.front();
    return *(it - 1);
}

Trajectory ensemble_mean(std::span<const Trajectory> trajectories, std::span<const double> time_grid)
{
    if (trajectories.empty())
        throw InvalidArgument("ensemble_mean: no trajectories");
    if (time_grid.empty())
        throw InvalidArgument("ensemble_mean: empty time grid");

    Trajectory mean;
    mean.runs = trajectories.size();
    mean.samples.reserve(time_grid.size());
    const double scale = 1.0 / static_cast<double>(trajectories.size());
    for (double t : time_grid) {
        TrajectorySample acc{t, 0.0, 0.0, 0.0};
        for (const Trajectory& traj : trajectories) {
            const TrajectorySample s = traj.at(t);
            acc.S += s.S;
            acc.I += s.I;
            acc.R += s.R;
        }
        acc.S *= scale;
        acc.I *= scale;
        acc.R *= scale;
        mean.samples.push_back(acc);
    }
    for (const Trajectory& traj : trajectories)
        mean.events += traj.events;
    return mean;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n)
{
    if (n < 2 || !(t1 > t0))
        throw InvalidArgument("uniform_grid: need n >= 2 and t1 > t0");
    std::vector<double> grid(n);
    const double h = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = t0 + h * static_cast<double>(i);
    grid.back() = t1;
    return grid;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory)
{
    os << "time,S,I,R\n";
    for (const auto& s : trajectory.samples)
        os << csv_number(s.time) << ',' << csv_number(s.S) << ',' << csv_number(s.I) << ',' << csv_number(s.R) << '\n';
}

void write_ensemble_csv(std::ostream& os, const Trajectory& mean)
{
    os << "time,mean_S,mean_I,mean_R,runs\n";
    for (const auto& s : mean.samples)
        os << csv_number(s.time) << ',' << csv_number(s.S) << ',' << csv_number(s.I) << ',' << csv_number(s.R) << ','
           << mean.runs << '\n';
}

} // namespace epinet
