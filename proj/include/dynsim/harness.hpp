#pragma once
// Open-loop scenario execution: torque schedule -> plant dynamics -> double
// integration -> recorded positions and velocities.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dynsim/error.hpp"
#include "dynsim/integrate.hpp"
#include "dynsim/models.hpp"
#include "dynsim/named_trajectory.hpp"
#include "dynsim/torque.hpp"

namespace dynsim {

enum class SolverKind { rk4, dopri45 };

inline std::string_view to_string(SolverKind s) noexcept {
    return s == SolverKind::rk4 ? "rk4" : "dopri45";
}

struct InitialState {
    std::vector<double> q;
    std::vector<double> dq;
};

struct Scenario {
    Model model = Model::scara;
    ModelParams params = ScaraParams{};
    InitialState initial_state;
    TorqueSchedule torque;
    double t0 = 0.0;
    double tf = 1.0;
    SolverKind solver = SolverKind::dopri45;
    SolverOptions solver_options;
    double rk4_step = 1e-3;  ///< fixed step when solver == rk4 [s]

    /// Throws ScenarioError describing the first inconsistency.
    void validate() const {
        const std::size_t dof = model_dof(model);
        try {
            if (model == Model::scara) {
                const auto* p = std::get_if<ScaraParams>(&params);
                if (!p) throw std::invalid_argument("scara scenario carries pendulum parameters");
                p->validate();
            } else {
                const auto* p = std::get_if<PendulumParams>(&params);
                if (!p) throw std::invalid_argument("pendulum scenario carries scara parameters");
                p->validate();
            }
            if (initial_state.q.size() != dof || initial_state.dq.size() != dof)
                throw std::invalid_argument("initial_state must have " + std::to_string(dof) +
                                            " positions and velocities");
            for (double v : initial_state.q)
                if (!std::isfinite(v)) throw std::invalid_argument("initial_state: non-finite q");
            for (double v : initial_state.dq)
                if (!std::isfinite(v)) throw std::invalid_argument("initial_state: non-finite dq");
            torque.validate(model_input_dim(model));
            if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0))
                throw std::invalid_argument("need finite tf > t0");
            if (solver == SolverKind::dopri45) solver_options.validate(tf - t0);
            if (solver == SolverKind::rk4 && !(rk4_step > 0.0))
                throw std::invalid_argument("rk4 step must be > 0");
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string("invalid scenario: ") + e.what());
        }
    }
};

inline const std::vector<std::string_view>& builtin_scenario_names() {
    static const std::vector<std::string_view> names{"scara-paper", "pendulum-paper"};
    return names;
}

/// "scara-paper": reference SCARA, tau = (3, 2, 0, 30), 10 s from rest.
/// "pendulum-paper": reference pendulum, tau = 0, 5 s from the upright rest.
inline Scenario builtin_scenario(std::string_view name) {
    Scenario s;
    if (name == "scara-paper") {
        s.model = Model::scara;
        s.params = ScaraParams{};
        s.initial_state = {std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)};
        s.torque = TorqueSchedule::constant({3.0, 2.0, 0.0, 30.0});
        s.t0 = 0.0;
        s.tf = 10.0;
        return s;
    }
    if (name == "pendulum-paper") {
        s.model = Model::pendulum;
        s.params = PendulumParams{};
        s.initial_state = {std::vector<double>(2, 0.0), std::vector<double>(2, 0.0)};
        s.torque = TorqueSchedule::constant({0.0});
        s.t0 = 0.0;
        s.tf = 5.0;
        return s;
    }
    throw UnknownScenario("unknown scenario '" + std::string(name) +
                          "' (expected scara-paper or pendulum-paper)");
}

namespace detail {

template <std::size_t N>
Vec<2 * N> pack_state(const InitialState& s) {
    Vec<2 * N> x{};
    for (std::size_t i = 0; i < N; ++i) {
        x[i] = s.q[i];
        x[N + i] = s.dq[i];
    }
    return x;
}

template <std::size_t N, class Rhs>
Trajectory<N> integrate_with(const Scenario& s, const Rhs& rhs, const Vec<N>& x0) {
    if (s.solver == SolverKind::rk4) return rk4(rhs, s.t0, x0, s.tf, s.rk4_step);
    return dopri45(rhs, s.t0, x0, s.tf, s.solver_options);
}

}  // namespace detail

/// State-space right-hand side x' = (dq, qdd(q, dq, tau(t))) for a SCARA.
inline auto scara_rhs(const ScaraParams& p, const TorqueSchedule& torque) {
    return [p, torque](double t, const Vec<8>& x) {
        Vec<4> q, dq, tau;
        const std::vector<double>& u = torque.at(t);
        for (std::size_t i = 0; i < 4; ++i) {
            q[i] = x[i];
            dq[i] = x[4 + i];
            tau[i] = u[i];
        }
        const Vec<4> ddq = scara_accel(p, q, dq, tau);
        Vec<8> dx;
        for (std::size_t i = 0; i < 4; ++i) {
            dx[i] = dq[i];
            dx[4 + i] = ddq[i];
        }
        return dx;
    };
}

inline auto pendulum_rhs(const PendulumParams& p, const TorqueSchedule& torque) {
    return [p, torque](double t, const Vec<4>& x) {
        const PendulumState s{Vec<2>{{x[0], x[1]}}, Vec<2>{{x[2], x[3]}}};
        const Vec<2> ddq = pendulum_accel(p, s, torque.at(t)[0]);
        return Vec<4>{{x[2], x[3], ddq[0], ddq[1]}};
    };
}

/// Validates and runs a scenario. Solver and model errors propagate.
inline NamedTrajectory simulate(const Scenario& s) {
    s.validate();
    if (s.model == Model::scara) {
        const auto traj = detail::integrate_with(s, scara_rhs(std::get<ScaraParams>(s.params), s.torque),
                                                 detail::pack_state<4>(s.initial_state));
        return label_trajectory(traj, model_labels(s.model), model_units(s.model));
    }
    const auto traj =
        detail::integrate_with(s, pendulum_rhs(std::get<PendulumParams>(s.params), s.torque),
                               detail::pack_state<2>(s.initial_state));
    return label_trajectory(traj, model_labels(s.model), model_units(s.model));
}

}  // namespace dynsim
