#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace epinet {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 20'000'000;
    /// Optional early stop, checked after every accepted step.
    std::function<bool(double t, std::span<const double> y)> stop_when;
};

/// Accepted steps of an integration with cubic Hermite dense output.
struct OdeSolution {
    std::size_t dimension = 0;
    std::vector<double> times;
    std::vector<double> states;       // times.size() x dimension, row major
    std::vector<double> derivatives;  // same layout
    std::size_t rejected_steps = 0;

    std::size_t size() const noexcept { return times.size(); }
    std::span<const double> state(std::size_t i) const { return {states.data() + i * dimension, dimension}; }
    std::span<const double> final_state() const { return state(times.size() - 1); }
    double final_time() const { return times.back(); }

    /// Interpolated state at t, clamped to the integrated interval.
    std::vector<double> at(double t) const;
};

/// Dormand-Prince 5(4) with per-step error control and step rejection.
/// Throws NumericError on step-size underflow (with the time reached) or when
/// max_steps is exhausted.
OdeSolution integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      const IntegratorOptions& options = {});

} // namespace epinet
