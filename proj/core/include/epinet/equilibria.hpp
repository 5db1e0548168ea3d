#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epinet/gillespie.hpp"
#include "epinet/pairwise.hpp"
#include "epinet/weights.hpp"

namespace epinet {

enum class SolveStatus { Converged, MaxIterations, SingularJacobian, LineSearchFailed };

std::string_view to_string(SolveStatus status);

struct SteadyStateOptions {
    int max_iterations = 200;
    /// Converged when the full right-hand side satisfies |F|_inf <= tolerance * N.
    double tolerance = 1e-10;
    int max_halvings = 30;
};

struct SteadyStateResult {
    PairwiseState state;
    double residual = 0.0;  ///< infinity norm of the full SIS right-hand side
    bool converged = false;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    std::string message;
};

/// Root of the SIS pairwise right-hand side by damped Newton iteration.
///
/// The conservation laws [S] + [I] = N and [SS]_m + 2[SI]_m + [II]_m = C_m
/// (C_m taken from the guess) are used to eliminate [S] and [SS]_m, leaving
/// the 1 + 2M unknowns ([I], [SI]_m, [II]_m) and a non-singular Jacobian.
/// The Jacobian is approximated by central differences with step
/// 1e-6 * max(1, |x|); each Newton step is halved until the residual norm
/// decreases and the state stays physical.
SteadyStateResult solve_sis_endemic(const WeightClasses& wc, EpidemicParams params, const Closure& closure, double n,
                                    const PairwiseState& initial_guess, const SteadyStateOptions& options = {});

/// SIS state after integrating the pairwise model from the standard initial
/// conditions up to `horizon`.
PairwiseState long_time_sis_state(const WeightClasses& wc, EpidemicParams params, const Closure& closure, double n,
                                  double initial_fraction, double horizon);

struct SweepOptions {
    double initial_fraction = 0.05;
    double ode_horizon_gamma_units = 500.0;  ///< seeding integration length, times 1/gamma
    SteadyStateOptions newton;
};

struct SweepPoint {
    double tau = 0.0;
    double p1 = 0.0;
    double i_over_n = 0.0;
    double residual = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIterations;
};

/// Endemic prevalence along an ascending tau grid by continuation. Each point
/// is seeded with the previous root; the first point, any point following a
/// disease-free or failed root, and any continuation step that fails or lands
/// on the disease-free root, is seeded from a long ODE integration.
/// Solver failures are recorded per point and do not abort the sweep.
std::vector<SweepPoint> sweep_endemic(const WeightClasses& wc, std::span<const double> taus, double gamma,
                                      ClosureKind closure, double n, const SweepOptions& options = {});

/// CSV `tau,p1,I_over_N,residual,converged`.
void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points, bool header = true);

} // namespace epinet
