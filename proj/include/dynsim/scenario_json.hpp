#pragma once
// JSON form of a Scenario. Keys are the Scenario field names; parameter
// keys keep the physical symbols (m1, L0, l1, I3, B4, ...), which are
// case-sensitive. Unknown keys are rejected at every level. Missing
// parameters take the reference values; missing solver settings take the
// solver defaults.
//
// {
//   "model": "scara",
//   "params": {"m1": 15, ...},
//   "initial_state": {"q": [0, 0, 0, 0], "dq": [0, 0, 0, 0]},
//   "torque": {"kind": "constant", "values": [[3, 2, 0, 30]]},
//   "t0": 0, "tf": 10,
//   "solver": "dopri45",
//   "solver_options": {"rtol": 1e-3, "atol": 1e-6, "h_init": null, "h_max": null,
//                      "max_steps": 1000000, "h": 0.001}
// }

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "dynsim/error.hpp"
#include "dynsim/harness.hpp"

namespace dynsim {

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
    if (!obj.is_object()) throw ScenarioError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ScenarioError(std::string(where) + ": unknown field '" + key + "'");
    }
}

inline double read_number(const json& obj, const char* key, double fallback,
                          std::string_view where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ScenarioError(std::string(where) + "." + key + ": expected a number");
    return v.get<double>();
}

inline std::vector<double> read_vector(const json& v, std::string_view where) {
    if (!v.is_array()) throw ScenarioError(std::string(where) + ": expected an array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ScenarioError(std::string(where) + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

inline ScaraParams scara_params_from_json(const json& j) {
    reject_unknown(j, {"m1", "m2", "m3", "m4", "l1", "l2", "lc1", "lc2", "I1", "I2", "I3", "I4",
                       "B1", "B2", "B3", "B4", "g"},
                   "params");
    ScaraParams p;
    p.m1 = read_number(j, "m1", p.m1, "params");
    p.m2 = read_number(j, "m2", p.m2, "params");
    p.m3 = read_number(j, "m3", p.m3, "params");
    p.m4 = read_number(j, "m4", p.m4, "params");
    p.l1 = read_number(j, "l1", p.l1, "params");
    p.l2 = read_number(j, "l2", p.l2, "params");
    p.lc1 = read_number(j, "lc1", p.lc1, "params");
    p.lc2 = read_number(j, "lc2", p.lc2, "params");
    p.I1 = read_number(j, "I1", p.I1, "params");
    p.I2 = read_number(j, "I2", p.I2, "params");
    p.I3 = read_number(j, "I3", p.I3, "params");
    p.I4 = read_number(j, "I4", p.I4, "params");
    p.B1 = read_number(j, "B1", p.B1, "params");
    p.B2 = read_number(j, "B2", p.B2, "params");
    p.B3 = read_number(j, "B3", p.B3, "params");
    p.B4 = read_number(j, "B4", p.B4, "params");
    p.g = read_number(j, "g", p.g, "params");
    return p;
}

inline PendulumParams pendulum_params_from_json(const json& j) {
    reject_unknown(j, {"m1", "L0", "L1", "l1", "I0", "I1", "g"}, "params");
    PendulumParams p;
    p.m1 = read_number(j, "m1", p.m1, "params");
    p.L0 = read_number(j, "L0", p.L0, "params");
    p.L1 = read_number(j, "L1", p.L1, "params");
    p.l1 = read_number(j, "l1", p.l1, "params");
    p.I0 = read_number(j, "I0", p.I0, "params");
    p.I1 = read_number(j, "I1", p.I1, "params");
    p.g = read_number(j, "g", p.g, "params");
    return p;
}

inline json to_json(const ScaraParams& p) {
    return {{"m1", p.m1}, {"m2", p.m2}, {"m3", p.m3}, {"m4", p.m4}, {"l1", p.l1},
            {"l2", p.l2}, {"lc1", p.lc1}, {"lc2", p.lc2}, {"I1", p.I1}, {"I2", p.I2},
            {"I3", p.I3}, {"I4", p.I4}, {"B1", p.B1}, {"B2", p.B2}, {"B3", p.B3},
            {"B4", p.B4}, {"g", p.g}};
}

inline json to_json(const PendulumParams& p) {
    return {{"m1", p.m1}, {"L0", p.L0}, {"L1", p.L1}, {"l1", p.l1},
            {"I0", p.I0}, {"I1", p.I1}, {"g", p.g}};
}

}  // namespace detail

/// Parses and validates a scenario. Throws ScenarioError.
inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::read_number;
    using detail::read_vector;
    detail::reject_unknown(j, {"model", "params", "initial_state", "torque", "t0", "tf", "solver",
                               "solver_options"},
                           "scenario");
    if (!j.contains("model") || !j.at("model").is_string())
        throw ScenarioError("scenario.model: required string (scara | pendulum)");
    const std::string model = j.at("model").get<std::string>();

    Scenario s;
    if (model == "scara") {
        s.model = Model::scara;
        s.params = detail::scara_params_from_json(j.value("params", nlohmann::json::object()));
    } else if (model == "pendulum") {
        s.model = Model::pendulum;
        s.params = detail::pendulum_params_from_json(j.value("params", nlohmann::json::object()));
    } else {
        throw ScenarioError("scenario.model: unknown model '" + model + "'");
    }
    const std::size_t dof = model_dof(s.model);

    s.initial_state = {std::vector<double>(dof, 0.0), std::vector<double>(dof, 0.0)};
    if (j.contains("initial_state")) {
        const auto& is = j.at("initial_state");
        detail::reject_unknown(is, {"q", "dq"}, "initial_state");
        if (is.contains("q")) s.initial_state.q = read_vector(is.at("q"), "initial_state.q");
        if (is.contains("dq")) s.initial_state.dq = read_vector(is.at("dq"), "initial_state.dq");
    }

    s.torque = TorqueSchedule::constant(std::vector<double>(model_input_dim(s.model), 0.0));
    if (j.contains("torque")) {
        const auto& tj = j.at("torque");
        detail::reject_unknown(tj, {"kind", "values", "switch_times"}, "torque");
        const std::string kind = tj.value("kind", std::string("constant"));
        if (kind == "constant")
            s.torque.kind = TorqueSchedule::Kind::constant;
        else if (kind == "piecewise_constant")
            s.torque.kind = TorqueSchedule::Kind::piecewise_constant;
        else
            throw ScenarioError("torque.kind: unknown kind '" + kind + "'");
        if (!tj.contains("values") || !tj.at("values").is_array())
            throw ScenarioError("torque.values: required array of vectors");
        s.torque.values.clear();
        for (const auto& v : tj.at("values")) s.torque.values.push_back(read_vector(v, "torque.values"));
        s.torque.switch_times.clear();
        if (tj.contains("switch_times"))
            s.torque.switch_times = read_vector(tj.at("switch_times"), "torque.switch_times");
    }

    s.t0 = read_number(j, "t0", 0.0, "scenario");
    if (!j.contains("tf")) throw ScenarioError("scenario.tf: required");
    s.tf = read_number(j, "tf", 0.0, "scenario");

    const std::string solver = j.value("solver", std::string("dopri45"));
    if (solver == "dopri45")
        s.solver = SolverKind::dopri45;
    else if (solver == "rk4")
        s.solver = SolverKind::rk4;
    else
        throw ScenarioError("scenario.solver: unknown solver '" + solver + "'");

    if (j.contains("solver_options")) {
        const auto& o = j.at("solver_options");
        detail::reject_unknown(o, {"rtol", "atol", "h_init", "h_max", "max_steps", "h"},
                               "solver_options");
        auto& so = s.solver_options;
        so.rtol = read_number(o, "rtol", so.rtol, "solver_options");
        so.atol = read_number(o, "atol", so.atol, "solver_options");
        if (o.contains("h_init") && !o.at("h_init").is_null())
            so.h_init = read_number(o, "h_init", 0.0, "solver_options");
        if (o.contains("h_max") && !o.at("h_max").is_null())
            so.h_max = read_number(o, "h_max", 0.0, "solver_options");
        if (o.contains("max_steps")) {
            if (!o.at("max_steps").is_number_unsigned())
                throw ScenarioError("solver_options.max_steps: expected a positive integer");
            so.max_steps = o.at("max_steps").get<std::size_t>();
        }
        s.rk4_step = read_number(o, "h", s.rk4_step, "solver_options");
    }

    s.validate();
    return s;
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    using nlohmann::json;
    json j;
    j["model"] = std::string(to_string(s.model));
    j["params"] = std::visit([](const auto& p) { return detail::to_json(p); }, s.params);
    j["initial_state"] = {{"q", s.initial_state.q}, {"dq", s.initial_state.dq}};
    json torque = {{"kind", s.torque.kind == TorqueSchedule::Kind::constant ? "constant"
                                                                            : "piecewise_constant"},
                   {"values", s.torque.values}};
    if (s.torque.kind == TorqueSchedule::Kind::piecewise_constant)
        torque["switch_times"] = s.torque.switch_times;
    j["torque"] = torque;
    j["t0"] = s.t0;
    j["tf"] = s.tf;
    j["solver"] = std::string(to_string(s.solver));
    const auto& o = s.solver_options;
    j["solver_options"] = {{"rtol", o.rtol},
                           {"atol", o.atol},
                           {"h_init", o.h_init ? json(*o.h_init) : json(nullptr)},
                           {"h_max", o.h_max ? json(*o.h_max) : json(nullptr)},
                           {"max_steps", o.max_steps},
                           {"h", s.rk4_step}};
    return j;
}

/// Reads a scenario file. Malformed JSON becomes a ScenarioError naming the
/// file; a missing file raises std::filesystem::filesystem_error.
inline Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::filesystem::filesystem_error(
            "cannot open scenario file", path,
            std::make_error_code(std::errc::no_such_file_or_directory));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

}  // namespace dynsim
