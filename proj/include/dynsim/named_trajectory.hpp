#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dynsim/error.hpp"
#include "dynsim/integrate.hpp"

namespace dynsim {

enum class Model { scara, pendulum };

inline std::string_view to_string(Model m) noexcept {
    return m == Model::scara ? "scara" : "pendulum";
}

/// Runtime-dimensioned trajectory with channel labels and units.
struct NamedTrajectory {
    std::vector<std::string> labels;
    std::vector<std::string> units;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<StepInfo> step_meta;
    SolverStats stats;

    std::size_t dimension() const noexcept { return labels.size(); }
    std::size_t size() const noexcept { return times.size(); }

    std::size_t channel_index(std::string_view label) const {
        const auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) throw UnknownChannel("unknown channel '" + std::string(label) + "'");
        return static_cast<std::size_t>(it - labels.begin());
    }

    std::vector<double> channel(std::string_view label) const {
        const std::size_t k = channel_index(label);
        std::vector<double> out;
        out.reserve(states.size());
        for (const auto& row : states) out.push_back(row[k]);
        return out;
    }
};

template <std::size_t N>
NamedTrajectory label_trajectory(const Trajectory<N>& traj, std::vector<std::string> labels,
                                 std::vector<std::string> units) {
    NamedTrajectory out;
    out.labels = std::move(labels);
    out.units = std::move(units);
    out.times = traj.times;
    out.states.reserve(traj.states.size());
    for (const auto& x : traj.states) out.states.emplace_back(x.begin(), x.end());
    out.step_meta = traj.step_meta;
    out.stats = traj.stats;
    return out;
}

/// Channel labels for a model: positions first, then velocities.
inline std::vector<std::string> model_labels(Model m) {
    if (m == Model::scara) return {"q1", "q2", "q3", "q4", "dq1", "dq2", "dq3", "dq4"};
    return {"theta0", "theta1", "dtheta0", "dtheta1"};
}

inline std::vector<std::string> model_units(Model m) {
    if (m == Model::scara) return {"rad", "rad", "rad", "m", "rad/s", "rad/s", "rad/s", "m/s"};
    return {"rad", "rad", "rad/s", "rad/s"};
}

inline std::size_t model_dof(Model m) noexcept { return m == Model::scara ? 4 : 2; }

/// Length of the torque vector: one per SCARA joint, the pendulum arm only.
inline std::size_t model_input_dim(Model m) noexcept { return m == Model::scara ? 4 : 1; }

}  // namespace dynsim
