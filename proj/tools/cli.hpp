#pragma once
// dynsim command line: scara | pendulum | run FILE | verify.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 runtime or model error.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dynsim/csv.hpp"
#include "dynsim/harness.hpp"
#include "dynsim/scenario_json.hpp"
#include "dynsim/svg.hpp"
#include "dynsim/verify.hpp"

namespace dynsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Raised for malformed flag values; maps to kExitUsage.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strict "a,b,c" parser: no spaces, '.' decimal point only.
inline std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view cell(text.data() + start,
                                    (comma == std::string::npos ? text.size() : comma) - start);
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size() ||
            !std::isfinite(v))
            throw UsageError("malformed number '" + std::string(cell) + "' in '" + text + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

namespace detail {

struct OutputFlags {
    std::string out;
    std::string plot;
    std::string channels;
    bool dump = false;
};

struct OverrideFlags {
    std::string tau;
    std::optional<double> tf;
    std::optional<double> rtol;
    std::optional<double> atol;
};

inline void add_output_flags(CLI::App* cmd, OutputFlags& o) {
    cmd->add_option("--out", o.out, "Write the trajectory CSV here (default: stdout)");
    cmd->add_option("--plot", o.plot, "Write an SVG plot here");
    cmd->add_option("--channels", o.channels,
                    "Comma-separated channels to plot (default: all)");
    cmd->add_flag("--dump-scenario", o.dump, "Print the resolved scenario JSON and exit");
}

inline void add_override_flags(CLI::App* cmd, OverrideFlags& o, const char* tau_help) {
    cmd->add_option("--tau", o.tau, tau_help);
    cmd->add_option("--tf", o.tf, "Final time [s]");
    cmd->add_option("--rtol", o.rtol, "Relative tolerance");
    cmd->add_option("--atol", o.atol, "Absolute tolerance");
}

inline void apply_overrides(Scenario& s, const OverrideFlags& o) {
    if (!o.tau.empty()) {
        std::vector<double> tau = parse_number_list(o.tau);
        if (tau.size() != model_input_dim(s.model))
            throw UsageError("--tau expects " + std::to_string(model_input_dim(s.model)) +
                             " value(s), got " + std::to_string(tau.size()));
        s.torque = TorqueSchedule::constant(std::move(tau));
    }
    if (o.tf) s.tf = *o.tf;
    if (o.rtol) s.solver_options.rtol = *o.rtol;
    if (o.atol) s.solver_options.atol = *o.atol;
}

inline std::vector<std::string> split_labels(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(text.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    return f;
}

inline int execute(const Scenario& s, const OutputFlags& o, std::ostream& out) {
    if (o.dump) {
        s.validate();
        out << scenario_to_json(s).dump(2) << '\n';
        return kExitOk;
    }
    const NamedTrajectory traj = simulate(s);
    if (o.out.empty()) {
        write_csv(traj, out);
    } else {
        auto f = open_output(o.out);
        write_csv(traj, f);
    }
    if (!o.plot.empty()) {
        const std::vector<std::string> channels =
            o.channels.empty() ? traj.labels : split_labels(o.channels);
        std::ostringstream svg;
        render_svg(traj, channels, svg);
        auto f = open_output(o.plot);
        f << svg.str();
        if (!f) throw std::runtime_error("failed writing '" + o.plot + "'");
    }
    return kExitOk;
}

}  // namespace detail

/// Entry point shared by main() and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Open-loop simulation of a SCARA manipulator and a rotational inverted pendulum",
                 "dynsim"};
    app.require_subcommand(1);

    detail::OutputFlags scara_out, pend_out, run_out;
    detail::OverrideFlags scara_ovr, pend_ovr;
    std::optional<double> theta1;
    std::string scenario_file;
    bool json_report = false;

    auto* scara = app.add_subcommand("scara", "Run the reference SCARA scenario");
    detail::add_override_flags(scara, scara_ovr, "Joint torques a,b,c,d [N m]");
    detail::add_output_flags(scara, scara_out);

    auto* pend = app.add_subcommand("pendulum", "Run the reference inverted-pendulum scenario");
    detail::add_override_flags(pend, pend_ovr, "Arm torque [N m]");
    pend->add_option("--theta1", theta1, "Initial pendulum angle from upright [rad]");
    detail::add_output_flags(pend, pend_out);

    auto* runf = app.add_subcommand("run", "Run a scenario JSON file");
    runf->add_option("file", scenario_file, "Scenario file")->required();
    detail::add_output_flags(runf, run_out);

    auto* verify = app.add_subcommand("verify", "Run the physics verification suite");
    verify->add_flag("--json", json_report, "Emit the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*scara) {
            Scenario s = builtin_scenario("scara-paper");
            detail::apply_overrides(s, scara_ovr);
            return detail::execute(s, scara_out, out);
        }
        if (*pend) {
            Scenario s = builtin_scenario("pendulum-paper");
            detail::apply_overrides(s, pend_ovr);
            if (theta1) s.initial_state.q[1] = *theta1;
            return detail::execute(s, pend_out, out);
        }
        if (*runf) {
            return detail::execute(load_scenario_file(scenario_file), run_out, out);
        }
        const auto reports = run_verification_suite();
        if (json_report) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : reports) j.push_back(r.to_json());
            out << j.dump(2) << '\n';
        } else {
            for (const auto& r : reports) out << r.to_text() << '\n';
        }
        return all_passed(reports) ? kExitOk : kExitVerifyFailed;
    } catch (const UsageError& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ScenarioError& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownScenario& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownChannel& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "dynsim: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace dynsim::cli
