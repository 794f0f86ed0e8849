#pragma once
// The full verification suite run by `dynsim verify`.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dynsim/analysis.hpp"
#include "dynsim/harness.hpp"
#include "dynsim/integrate.hpp"

namespace dynsim {

/// Closed-form motion of the vertical joint, which decouples from the arm:
/// m4 qdd4 + B4 qd4 + m4 g = tau4.
struct PrismaticJointSolution {
    double q = 0.0;
    double dq = 0.0;
};

inline PrismaticJointSolution scara_joint4_closed_form(const ScaraParams& p, double tau4,
                                                       double t, double q0 = 0.0,
                                                       double dq0 = 0.0) {
    const double force = tau4 - p.m4 * p.g;
    if (p.B4 == 0.0) {
        const double a = force / p.m4;
        return {q0 + dq0 * t + 0.5 * a * t * t, dq0 + a * t};
    }
    const double v_inf = force / p.B4;
    const double tc = p.m4 / p.B4;
    const double decay = std::exp(-t / tc);
    return {q0 + v_inf * t + (dq0 - v_inf) * tc * (1.0 - decay), v_inf + (dq0 - v_inf) * decay};
}

/// Samples a fixed-step trajectory at arbitrary times by cubic Hermite
/// interpolation between neighbouring nodes, using f for the node slopes.
template <std::size_t N, class Rhs>
Vec<N> hermite_at(const Trajectory<N>& traj, Rhs&& f, double t) {
    const auto& ts = traj.times;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t k = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    if (k + 1 >= ts.size()) return traj.states.back();
    const double t0 = ts[k], t1 = ts[k + 1];
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const Vec<N>& x0 = traj.states[k];
    const Vec<N>& x1 = traj.states[k + 1];
    const Vec<N> d0 = f(t0, x0);
    const Vec<N> d1 = f(t1, x1);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * x0 + (h * (s3 - 2 * s2 + s)) * d0 + (-2 * s3 + 3 * s2) * x1 +
           (h * (s3 - s2)) * d1;
}

/// Max |x_adaptive(t_k) - x_reference(t_k)| over the adaptive solver's
/// recorded times, the reference sampled by Hermite interpolation.
template <std::size_t N, class Rhs>
double max_deviation(const Trajectory<N>& adaptive, const Trajectory<N>& reference, Rhs&& f) {
    double worst = 0.0;
    for (std::size_t k = 0; k < adaptive.size(); ++k)
        worst = std::max(worst,
                         norm_inf(adaptive.states[k] - hermite_at(reference, f, adaptive.times[k])));
    return worst;
}

struct SuiteSettings {
    std::uint64_t seed = 1;
    std::size_t structural_samples = 1000;
    std::size_t el_samples = 100;
};

inline std::vector<VerificationReport> run_verification_suite(const SuiteSettings& cfg = {}) {
    std::vector<VerificationReport> out;
    const ScaraParams sp;
    const PendulumParams pp;

    out.push_back(scara_mass_spd_check(sp, cfg.structural_samples, cfg.seed));
    out.push_back(pendulum_mass_spd_check(pp, cfg.structural_samples, cfg.seed));
    out.push_back(skew_symmetry_check(sp, cfg.structural_samples, cfg.seed));
    out.push_back(el_residual_check(pp, cfg.el_samples, cfg.seed, 0.5, 1e-4));
    out.push_back(pendulum_equation_check(pp, cfg.structural_samples, cfg.seed));

    {
        Scenario s = builtin_scenario("pendulum-paper");
        s.initial_state.q = {0.0, std::numbers::pi - 0.1};
        s.solver_options.rtol = 1e-10;
        s.solver_options.atol = 1e-12;
        const NamedTrajectory traj = simulate(s);
        out.push_back(VerificationReport::make("pendulum_energy_drift", energy_drift(pp, traj),
                                               1e-8, traj.size()));
    }
    {
        Scenario s = builtin_scenario("scara-paper");
        s.solver_options.rtol = 1e-8;
        s.solver_options.h_max = 1e-3;
        const NamedTrajectory traj = simulate(s);
        out.push_back(VerificationReport::make(
            "scara_power_balance", power_balance_residual(sp, traj, s.torque), 1e-3, traj.size()));
    }
    {
        const Scenario s = builtin_scenario("scara-paper");
        const NamedTrajectory traj = simulate(s);
        const auto exact = scara_joint4_closed_form(sp, s.torque.values[0][3], s.tf);
        const auto& last = traj.states.back();
        out.push_back(VerificationReport::make("scara_joint4_velocity",
                                               std::abs(last[7] - exact.dq), 2e-3, traj.size()));
        out.push_back(VerificationReport::make("scara_joint4_position",
                                               std::abs(last[3] - exact.q), 2e-2, traj.size()));
    }
    return out;
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const VerificationReport& r) { return r.passed; });
}

}  // namespace dynsim
