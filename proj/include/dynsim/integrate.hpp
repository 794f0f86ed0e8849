#pragma once
// Explicit Runge-Kutta integrators over fixed-size state vectors.
//
// rk4     - classical fourth-order scheme with a uniform step.
// dopri45 - embedded Dormand-Prince 5(4) pair with adaptive step control.
//           The fifth-order solution is propagated (local extrapolation) and
//           the difference to the embedded fourth-order solution is the local
//           error estimate. Every accepted step is recorded; there is no dense
//           output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynsim/error.hpp"
#include "dynsim/smallmat.hpp"

namespace dynsim {

struct StepInfo {
    double h = 0.0;      ///< accepted step size [s]
    double error = 0.0;  ///< scaled RMS error norm of the step (0 for rk4)
};

struct SolverStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec<N>> states;
    std::vector<StepInfo> step_meta;  ///< one entry per accepted step
    SolverStats stats;

    std::size_t size() const noexcept { return times.size(); }
    const Vec<N>& final_state() const { return states.back(); }
};

/// Adaptive-solver settings. Unset step bounds resolve against the time span:
/// h_max = span/10, h_init = span/100 (capped at h_max).
struct SolverOptions {
    double rtol = 1e-3;
    double atol = 1e-6;
    std::optional<double> h_init;
    std::optional<double> h_max;
    std::size_t max_steps = 1'000'000;

    double resolved_h_max(double span) const { return h_max.value_or(span / 10.0); }
    double resolved_h_init(double span) const {
        return h_init ? *h_init : std::min(span / 100.0, resolved_h_max(span));
    }

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate(double span) const {
        if (!(rtol > 0.0)) throw std::invalid_argument("SolverOptions: rtol must be > 0");
        if (!(atol > 0.0)) throw std::invalid_argument("SolverOptions: atol must be > 0");
        const double h0 = resolved_h_init(span);
        const double hm = resolved_h_max(span);
        if (!(h0 > 0.0) || !(h0 <= hm))
            throw std::invalid_argument("SolverOptions: need 0 < h_init <= h_max");
        if (max_steps < 1) throw std::invalid_argument("SolverOptions: max_steps must be >= 1");
    }
};

namespace detail {

template <std::size_t N>
void require_finite(const Vec<N>& x, double t, const char* who) {
    if (!all_finite(x))
        throw NonFiniteState(std::string(who) + ": non-finite state at t = " + std::to_string(t));
}

inline void require_span(double t0, double tf, const char* who) {
    if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0))
        throw std::invalid_argument(std::string(who) + ": need finite tf > t0");
}

}  // namespace detail

/// Classical RK4 with uniform step h; the last step is shortened to hit tf.
template <std::size_t N, class Rhs>
Trajectory<N> rk4(Rhs&& f, double t0, const Vec<N>& x0, double tf, double h) {
    detail::require_span(t0, tf, "rk4");
    if (!(h > 0.0)) throw std::invalid_argument("rk4: step must be > 0");
    detail::require_finite(x0, t0, "rk4");

    // Number of steps, tolerant to the quotient landing a hair above an integer.
    const auto n = static_cast<std::size_t>(std::ceil((tf - t0) / h * (1.0 - 1e-12)));

    Trajectory<N> traj;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.step_meta.reserve(n);
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    Vec<N> x = x0;
    double t = t0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t_next = (k == n) ? tf : t0 + static_cast<double>(k) * h;
        const double dt = t_next - t;
        const Vec<N> k1 = f(t, x);
        const Vec<N> k2 = f(t + 0.5 * dt, x + (0.5 * dt) * k1);
        const Vec<N> k3 = f(t + 0.5 * dt, x + (0.5 * dt) * k2);
        const Vec<N> k4 = f(t + dt, x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = t_next;
        detail::require_finite(x, t, "rk4");
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.step_meta.push_back({dt, 0.0});
        traj.stats.accepted += 1;
        traj.stats.rhs_evals += 4;
    }
    return traj;
}

namespace dopri {
// Dormand-Prince RK5(4)7M coefficients.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
// Fifth-order weights (also row 7 of the tableau, hence FSAL).
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Fifth-order minus fourth-order weights.
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

inline constexpr double kSafety = 0.9;
inline constexpr double kMinFactor = 0.2;
inline constexpr double kMaxFactor = 5.0;
inline constexpr double kUnderflowFraction = 1e-14;
}  // namespace dopri

/// RMS of e_i / (atol + rtol * max(|x_i|, |x_new_i|)).
template <std::size_t N>
double scaled_error_norm(const Vec<N>& err, const Vec<N>& x, const Vec<N>& x_new, double rtol,
                         double atol) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::max(std::abs(x[i]), std::abs(x_new[i]));
        const double r = err[i] / sc;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(N));
}

/// Step-size multiplier for the next attempt given the scaled error.
inline double step_factor(double err) noexcept {
    if (!std::isfinite(err)) return dopri::kMinFactor;
    if (err == 0.0) return dopri::kMaxFactor;
    return std::min(dopri::kMaxFactor,
                    std::max(dopri::kMinFactor, dopri::kSafety * std::pow(err, -0.2)));
}

/// Adaptive Dormand-Prince 4(5). A trial is accepted when its scaled error
/// norm is <= 1. Throws MaxStepsExceeded, StepUnderflow or NonFiniteState.
template <std::size_t N, class Rhs>
Trajectory<N> dopri45(Rhs&& f, double t0, const Vec<N>& x0, double tf,
                      const SolverOptions& opts = {}) {
    using namespace dopri;
    detail::require_span(t0, tf, "dopri45");
    const double span = tf - t0;
    opts.validate(span);
    detail::require_finite(x0, t0, "dopri45");

    const double h_max = opts.resolved_h_max(span);
    const double h_min = kUnderflowFraction * span;

    Trajectory<N> traj;
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    double t = t0;
    Vec<N> x = x0;
    Vec<N> k1 = f(t, x);
    traj.stats.rhs_evals += 1;
    detail::require_finite(k1, t, "dopri45 (derivative)");

    double h = std::min(opts.resolved_h_init(span), h_max);
    std::size_t attempts = 0;

    while (t < tf) {
        if (attempts >= opts.max_steps)
            throw MaxStepsExceeded("dopri45: exceeded " + std::to_string(opts.max_steps) +
                                   " step attempts at t = " + std::to_string(t));
        ++attempts;

        bool last = false;
        if (t + h >= tf) {
            h = tf - t;
            last = true;
        } else if (h < h_min) {
            throw StepUnderflow("dopri45: step size " + std::to_string(h) +
                                " underflow at t = " + std::to_string(t));
        }

        const Vec<N> k2 = f(t + c2 * h, x + h * (a21 * k1));
        const Vec<N> k3 = f(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
        const Vec<N> k4 = f(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec<N> k5 = f(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec<N> k6 =
            f(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec<N> x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double t_new = last ? tf : t + h;
        const Vec<N> k7 = f(t_new, x_new);
        traj.stats.rhs_evals += 6;

        const Vec<N> err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const bool finite_trial = all_finite(x_new) && all_finite(k7);
        const double err = finite_trial
                               ? scaled_error_norm(err_vec, x, x_new, opts.rtol, opts.atol)
                               : std::numeric_limits<double>::infinity();

        const double factor = step_factor(err);
        if (err <= 1.0) {
            traj.step_meta.push_back({h, err});
            traj.stats.accepted += 1;
            t = t_new;
            x = x_new;
            k1 = k7;
            traj.times.push_back(t);
            traj.states.push_back(x);
            h = std::min(h * factor, h_max);
        } else {
            traj.stats.rejected += 1;
            h *= factor;
            if (h < h_min && !finite_trial)
                throw NonFiniteState("dopri45: non-finite state near t = " + std::to_string(t));
            if (h < h_min)
                throw StepUnderflow("dopri45: step size " + std::to_string(h) +
                                    " underflow at t = " + std::to_string(t));
        }
    }
    return traj;
}

}  // namespace dynsim
