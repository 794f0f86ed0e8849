#pragma once
// Physics checks for the plant models: Euler-Lagrange residuals of the
// pendulum Lagrangian, skew-symmetry of Mdot - 2C for the SCARA, mass-matrix
// definiteness, energy drift and power balance along trajectories.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dynsim/error.hpp"
#include "dynsim/models.hpp"
#include "dynsim/named_trajectory.hpp"
#include "dynsim/smallmat.hpp"
#include "dynsim/torque.hpp"

namespace dynsim {

/// Central-difference step for every derivative check.
inline constexpr double kFiniteDifferenceStep = 1e-6;

struct VerificationReport {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::size_t samples = 0;

    static VerificationReport make(std::string name, double residual, double threshold,
                                   std::size_t samples) {
        const bool ok = std::isfinite(residual) && residual <= threshold;
        return {std::move(name), residual, threshold, ok, samples};
    }

    std::string to_text() const {
        char buf[256];
        std::snprintf(buf, sizeof buf, "[%s] %-32s residual=%.6e threshold=%.3e samples=%zu",
                      passed ? "PASS" : "FAIL", name.c_str(), residual, threshold, samples);
        return buf;
    }

    nlohmann::json to_json() const {
        return {{"name", name},
                {"residual", residual},
                {"threshold", threshold},
                {"pass", passed},
                {"samples", samples}};
    }
};

/// Uniform sampler over a 64-bit LCG (Knuth's MMIX constants). Each draw
/// advances the state and maps its top 53 bits to [0, 1).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    template <std::size_t N>
    Vec<N> uniform_vec(double lo, double hi) {
        Vec<N> v{};
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                    1442695040888963407ULL, 0ULL>
        engine_;
};

/// Positions in [-pi, pi], velocities in [-2, 2].
template <std::size_t N>
State<N> sample_state(Sampler& rng) {
    State<N> s;
    s.q = rng.uniform_vec<N>(-std::numbers::pi, std::numbers::pi);
    s.dq = rng.uniform_vec<N>(-2.0, 2.0);
    return s;
}

// ---------------------------------------------------------------------------
// Euler-Lagrange residual
// ---------------------------------------------------------------------------

/// d/dt(dL/d(dtheta_i)) - dL/dtheta_i - (tau, 0)_i, with every derivative of
/// the Lagrangian taken by central differences and the time derivative
/// formed along (dq, ddq) by the chain rule.
inline Vec<2> el_residual(const PendulumParams& p, const PendulumState& s, const Vec<2>& ddq,
                          double tau) {
    constexpr double h = kFiniteDifferenceStep;
    const auto L = [&p](const Vec<2>& q, const Vec<2>& dq) {
        return pendulum_lagrangian(p, PendulumState{q, dq});
    };
    const auto momentum = [&](const Vec<2>& q, const Vec<2>& dq, std::size_t i) {
        Vec<2> up = dq, dn = dq;
        up[i] += h;
        dn[i] -= h;
        return (L(q, up) - L(q, dn)) / (2.0 * h);
    };

    const Vec<2> generalized_force{{tau, 0.0}};
    Vec<2> r{};
    for (std::size_t i = 0; i < 2; ++i) {
        const double dp_dt = (momentum(s.q + h * s.dq, s.dq + h * ddq, i) -
                              momentum(s.q - h * s.dq, s.dq - h * ddq, i)) /
                             (2.0 * h);
        Vec<2> qu = s.q, qd = s.q;
        qu[i] += h;
        qd[i] -= h;
        const double dL_dq = (L(qu, s.dq) - L(qd, s.dq)) / (2.0 * h);
        r[i] = dp_dt - dL_dq - generalized_force[i];
    }
    return r;
}

/// Max EL residual over random states with qdd from pendulum_accel.
inline VerificationReport el_residual_check(const PendulumParams& p, std::size_t samples,
                                            std::uint64_t seed, double tau = 0.5,
                                            double threshold = 1e-4) {
    Sampler rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const PendulumState s = sample_state<2>(rng);
        worst = std::max(worst, norm_inf(el_residual(p, s, pendulum_accel(p, s, tau), tau)));
    }
    return VerificationReport::make("pendulum_el_residual", worst, threshold, samples);
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

/// max |N + N^T| for N = Mdot - 2C at one state, Mdot by central differences
/// of M along dq.
template <class Coriolis>
double skew_symmetry_residual(const ScaraParams& p, const ScaraState& s, Coriolis&& coriolis) {
    constexpr double h = kFiniteDifferenceStep;
    const Mat<4> Mdot =
        (scara_mass_matrix(p, s.q + h * s.dq) - scara_mass_matrix(p, s.q - h * s.dq)) *
        (1.0 / (2.0 * h));
    const Mat<4> N = Mdot - 2.0 * coriolis(p, s.q, s.dq);
    return max_abs(N + transpose(N));
}

template <class Coriolis>
VerificationReport skew_symmetry_check(const ScaraParams& p, std::size_t samples,
                                       std::uint64_t seed, Coriolis&& coriolis,
                                       double threshold = 1e-5) {
    if (samples < 1) throw std::invalid_argument("skew_symmetry_check: samples must be >= 1");
    Sampler rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k)
        worst = std::max(worst, skew_symmetry_residual(p, sample_state<4>(rng), coriolis));
    return VerificationReport::make("scara_skew_symmetry", worst, threshold, samples);
}

inline VerificationReport skew_symmetry_check(const ScaraParams& p, std::size_t samples,
                                              std::uint64_t seed) {
    return skew_symmetry_check(
        p, samples, seed,
        [](const ScaraParams& pp, const Vec<4>& q, const Vec<4>& dq) {
            return scara_coriolis(pp, q, dq);
        });
}

/// Residual is the number of sampled configurations whose mass matrix fails
/// to factor; q2 uniform on [0, 2pi).
inline VerificationReport scara_mass_spd_check(const ScaraParams& p, std::size_t samples,
                                               std::uint64_t seed) {
    Sampler rng(seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        Vec<4> q = rng.uniform_vec<4>(-std::numbers::pi, std::numbers::pi);
        q[1] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (!is_positive_definite(scara_mass_matrix(p, q))) ++failures;
    }
    return VerificationReport::make("scara_mass_matrix_spd", static_cast<double>(failures), 0.0,
                                    samples);
}

inline VerificationReport pendulum_mass_spd_check(const PendulumParams& p, std::size_t samples,
                                                  std::uint64_t seed) {
    Sampler rng(seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < samples; ++k)
        if (!is_positive_definite(pendulum_mass_matrix(p, rng.uniform(0.0, 2.0 * std::numbers::pi))))
            ++failures;
    return VerificationReport::make("pendulum_mass_matrix_spd", static_cast<double>(failures),
                                    0.0, samples);
}

/// Substitutes pendulum_accel back into the scalar arm and pendulum
/// equations of motion (arm equation with the sin^2 inertia term).
inline VerificationReport pendulum_equation_check(const PendulumParams& p, std::size_t samples,
                                                  std::uint64_t seed, double threshold = 1e-10) {
    Sampler rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const PendulumState s = sample_state<2>(rng);
        const double tau = rng.uniform(-1.0, 1.0);
        const Vec<2> a = pendulum_accel(p, s, tau);
        const double st = std::sin(s.q[1]), ct = std::cos(s.q[1]);
        const double w0 = s.dq[0], w1 = s.dq[1];
        const double ml2 = p.l1 * p.l1 * p.m1;
        const double arm = p.I0 * a[0] + p.L0 * p.L0 * p.m1 * a[0] +
                           ml2 * (a[0] * st * st + 2.0 * w0 * w1 * st * ct) +
                           p.L0 * p.l1 * p.m1 * (a[1] * ct - w1 * w1 * st);
        const double pend = p.I1 * a[1] + ml2 * a[1] + p.L0 * p.l1 * p.m1 * a[0] * ct -
                            ml2 * w0 * w0 * st * ct - p.m1 * p.g * p.l1 * st;
        worst = std::max({worst, std::abs(arm - tau), std::abs(pend)});
    }
    return VerificationReport::make("pendulum_equations_of_motion", worst, threshold, samples);
}

// ---------------------------------------------------------------------------
// Trajectory bookkeeping
// ---------------------------------------------------------------------------

namespace detail {

template <std::size_t N>
State<N> unpack_state(const std::vector<double>& row) {
    State<N> s;
    for (std::size_t i = 0; i < N; ++i) {
        s.q[i] = row[i];
        s.dq[i] = row[N + i];
    }
    return s;
}

inline void require_dimension(const NamedTrajectory& traj, std::size_t dim, const char* who) {
    if (traj.dimension() != dim ||
        (!traj.states.empty() && traj.states.front().size() != dim))
        throw ModelMismatch(std::string(who) + ": trajectory has dimension " +
                            std::to_string(traj.dimension()) + ", model expects " +
                            std::to_string(dim));
}

}  // namespace detail

/// max_t |E(t) - E(t0)|.
inline double energy_drift(const PendulumParams& p, const NamedTrajectory& traj) {
    detail::require_dimension(traj, 4, "energy_drift");
    if (traj.states.empty()) return 0.0;
    const double e0 = pendulum_energy(p, detail::unpack_state<2>(traj.states.front())).total;
    double drift = 0.0;
    for (const auto& row : traj.states)
        drift = std::max(drift, std::abs(pendulum_energy(p, detail::unpack_state<2>(row)).total - e0));
    return drift;
}

inline double energy_drift(const ScaraParams& p, const NamedTrajectory& traj) {
    detail::require_dimension(traj, 8, "energy_drift");
    if (traj.states.empty()) return 0.0;
    const double e0 = scara_energy(p, detail::unpack_state<4>(traj.states.front())).total;
    double drift = 0.0;
    for (const auto& row : traj.states)
        drift = std::max(drift, std::abs(scara_energy(p, detail::unpack_state<4>(row)).total - e0));
    return drift;
}

/// Dispatch on a model id; the parameter alternative must match it.
inline double energy_drift(Model model, const ModelParams& params, const NamedTrajectory& traj) {
    if (model == Model::scara) {
        const auto* p = std::get_if<ScaraParams>(&params);
        if (!p) throw ModelMismatch("energy_drift: scara model given pendulum parameters");
        return energy_drift(*p, traj);
    }
    const auto* p = std::get_if<PendulumParams>(&params);
    if (!p) throw ModelMismatch("energy_drift: pendulum model given scara parameters");
    return energy_drift(*p, traj);
}

/// |E(tf) - E(t0) - integral of dq^T (tau - B dq) dt|, trapezoid rule over
/// the recorded samples.
inline double power_balance_residual(const ScaraParams& p, const NamedTrajectory& traj,
                                     const TorqueSchedule& tau) {
    detail::require_dimension(traj, 8, "power_balance_residual");
    if (traj.states.size() < 2) return 0.0;
    const Vec<4> B = p.friction();
    const auto power = [&](std::size_t k) {
        const ScaraState s = detail::unpack_state<4>(traj.states[k]);
        const std::vector<double>& u = tau.at(traj.times[k]);
        double w = 0.0;
        for (std::size_t i = 0; i < 4; ++i) w += s.dq[i] * (u[i] - B[i] * s.dq[i]);
        return w;
    };
    double work = 0.0;
    double prev = power(0);
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double cur = power(k);
        work += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
        prev = cur;
    }
    const double e0 = scara_energy(p, detail::unpack_state<4>(traj.states.front())).total;
    const double e1 = scara_energy(p, detail::unpack_state<4>(traj.states.back())).total;
    return std::abs(e1 - e0 - work);
}

}  // namespace dynsim
