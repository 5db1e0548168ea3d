#include "epinet/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epinet/errors.hpp"

namespace epinet {

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double rms_norm(std::span<const double> v, std::span<const double> y, const IntegratorOptions& opt)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
        acc += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(std::max<std::size_t>(v.size(), 1)));
}

double initial_step(const OdeRhs& rhs, double t0, std::span<const double> y0, std::span<const double> f0,
                    double direction_span, const IntegratorOptions& opt)
{
    const double d0 = rms_norm(y0, y0, opt);
    const double d1 = rms_norm(f0, y0, opt);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, direction_span);

    std::vector<double> y1(y0.size()), f1(y0.size()), diff(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        y1[i] = y0[i] + h0 * f0[i];
    rhs(t0 + h0, y1, f1);
    for (std::size_t i = 0; i < y0.size(); ++i)
        diff[i] = f1[i] - f0[i];
    const double d2 = rms_norm(diff, y0, opt) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, direction_span, opt.max_step});
}

} // namespace

std::vector<double> OdeSolution::at(double t) const
{
    if (times.empty())
        throw InvalidArgument("ode solution: no accepted steps");
    if (t <= times.front())
        return std::vector<double>(state(0).begin(), state(0).end());
    if (t >= times.back())
        return std::vector<double>(final_state().begin(), final_state().end());

    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const std::size_t i = j - 1;
    const double h = times[j] - times[i];
    const double s = (t - times[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);

    std::vector<double> out(dimension);
    const double* y0 = states.data() + i * dimension;
    const double* y1 = states.data() + j * dimension;
    const double* f0 = derivatives.data() + i * dimension;
    const double* f1 = derivatives.data() + j * dimension;
    for (std::size_t k = 0; k < dimension; ++k)
        out[k] = h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k];
    return out;
}

OdeSolution integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                      const IntegratorOptions& options)
{
    if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
        throw InvalidArgument("integrate: tolerances must be positive");
    if (!(t1 >= t0))
        throw InvalidArgument("integrate: need t1 >= t0");

    const std::size_t n = y0.size();
    OdeSolution sol;
    sol.dimension = n;

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n), scale_ref(n);
    rhs(t0, y, k1);

    const auto record = [&](double t, std::span<const double> state, std::span<const double> deriv) {
        sol.times.push_back(t);
        sol.states.insert(sol.states.end(), state.begin(), state.end());
        sol.derivatives.insert(sol.derivatives.end(), deriv.begin(), deriv.end());
    };
    record(t0, y, k1);
    if (t1 == t0)
        return sol;

    double t = t0;
    double h = initial_step(rhs, t0, y, k1, t1 - t0, options);
    std::size_t steps = 0;
    bool last_rejected = false;

    while (t < t1) {
        if (++steps > options.max_steps) {
            std::ostringstream msg;
            msg << "integrate: exceeded " << options.max_steps << " steps at t=" << t;
            throw NumericError(msg.str());
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg << "integrate: step size underflow at t=" << t;
            throw NumericError(msg.str());
        }
        h = std::min(h, options.max_step);
        if (t + h > t1 || t1 - (t + h) < 1e-12 * std::max(1.0, std::abs(t1)))
            h = t1 - t;

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            scale_ref[i] = std::max(std::abs(y[i]), std::abs(ynew[i]));
        }
        const double err_norm = rms_norm(err, scale_ref, options);

        if (err_norm <= 1.0) {
            t = (h == t1 - t) ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
            record(t, y, k1);
            double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
            factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
            h *= factor;
            last_rejected = false;
            if (options.stop_when && options.stop_when(t, y))
                break;
        } else {
            ++sol.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            last_rejected = true;
        }
    }
    return sol;
}

} // namespace epinet
