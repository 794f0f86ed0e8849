#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynsim {

/// Open-loop input tau(t): either one constant vector or a piecewise-constant
/// sequence. values[k] applies on [switch_times[k-1], switch_times[k]); the
/// schedule is right-continuous at every switch.
struct TorqueSchedule {
    enum class Kind { constant, piecewise_constant };

    Kind kind = Kind::constant;
    std::vector<std::vector<double>> values;
    std::vector<double> switch_times;

    static TorqueSchedule constant(std::vector<double> tau) {
        return {Kind::constant, {std::move(tau)}, {}};
    }
    static TorqueSchedule piecewise(std::vector<std::vector<double>> values,
                                    std::vector<double> switch_times) {
        return {Kind::piecewise_constant, std::move(values), std::move(switch_times)};
    }

    std::size_t dimension() const noexcept { return values.empty() ? 0 : values.front().size(); }

    const std::vector<double>& at(double t) const {
        if (kind == Kind::constant) return values.front();
        const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
        return values[static_cast<std::size_t>(it - switch_times.begin())];
    }

    void validate(std::size_t dim) const {
        if (values.empty()) throw std::invalid_argument("torque: no values");
        if (kind == Kind::constant && values.size() != 1)
            throw std::invalid_argument("torque: constant schedule takes exactly one vector");
        if (kind == Kind::constant && !switch_times.empty())
            throw std::invalid_argument("torque: constant schedule takes no switch_times");
        if (kind == Kind::piecewise_constant && values.size() != switch_times.size() + 1)
            throw std::invalid_argument("torque: piecewise schedule needs one more value than "
                                        "switch_times");
        for (const auto& v : values) {
            if (v.size() != dim)
                throw std::invalid_argument("torque: vector length " + std::to_string(v.size()) +
                                            " does not match model dimension " +
                                            std::to_string(dim));
            for (double x : v)
                if (!std::isfinite(x)) throw std::invalid_argument("torque: non-finite value");
        }
        for (std::size_t i = 0; i < switch_times.size(); ++i) {
            if (!std::isfinite(switch_times[i]))
                throw std::invalid_argument("torque: non-finite switch time");
            if (i > 0 && !(switch_times[i] > switch_times[i - 1]))
                throw std::invalid_argument("torque: switch_times must be strictly increasing");
        }
    }
};

}  // namespace dynsim
