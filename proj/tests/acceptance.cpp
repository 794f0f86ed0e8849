// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance <path-to-dynsim> [scratch-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dynsim/analysis.hpp"
#include "dynsim/csv.hpp"
#include "dynsim/harness.hpp"
#include "dynsim/integrate.hpp"
#include "dynsim/verify.hpp"

namespace fs = std::filesystem;
using namespace dynsim;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        detail += detail.empty() ? " " : "; ";
        detail += what + (cond ? "" : " [x]");
        ok = ok && cond;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Closed form of m4 qdd4 + B4 qd4 + m4 g = tau4 from rest.
std::pair<double, double> joint4_exact(double tau4, double t) {
    const double m = 3.0, B = 0.5, g = 9.81;
    const double v_inf = (tau4 - m * g) / B;
    const double tc = m / B;
    return {v_inf * (t - tc * (1.0 - std::exp(-t / tc))), v_inf * (1.0 - std::exp(-t / tc))};
}

Outcome criterion1() {
    Outcome o;
    const auto traj = simulate(builtin_scenario("scara-paper"));
    const auto& last = traj.states.back();
    const auto [q4, dq4] = joint4_exact(30.0, 10.0);
    o.require(std::abs(dq4 - 0.92468) <= 1e-5 && std::abs(q4 - 5.85191) <= 1e-5,
              "closed form dq4=" + num(dq4) + " q4=" + num(q4));
    o.require(std::abs(last[7] - 0.92468) <= 2e-3, "|dq4(10)-0.92468|=" + num(std::abs(last[7] - 0.92468)));
    o.require(std::abs(last[3] - 5.85191) <= 2e-2, "|q4(10)-5.85191|=" + num(std::abs(last[3] - 5.85191)));
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto traj = simulate(builtin_scenario("pendulum-paper"));
    double worst = 0.0;
    for (const auto& row : traj.states)
        for (double v : row) worst = std::max(worst, std::abs(v));
    o.require(traj.times.back() == 5.0, "tf=5");
    o.require(worst <= 1e-12, "max|state|=" + num(worst));
    return o;
}

Outcome criterion3() {
    Outcome o;
    Scenario s = builtin_scenario("pendulum-paper");
    s.initial_state.q = {0.0, std::numbers::pi - 0.1};
    s.solver_options.rtol = 1e-10;
    s.solver_options.atol = 1e-12;
    const double drift = energy_drift(PendulumParams{}, simulate(s));
    o.require(drift <= 1e-8, "drift=" + num(drift) + " J");
    return o;
}

Outcome criterion4() {
    Outcome o;
    Scenario s = builtin_scenario("scara-paper");
    s.solver_options.rtol = 1e-8;
    s.solver_options.h_max = 1e-3;
    const auto traj = simulate(s);
    double max_step = 0.0;
    for (const auto& m : traj.step_meta) max_step = std::max(max_step, m.h);
    const double r = power_balance_residual(ScaraParams{}, traj, s.torque);
    o.require(max_step <= 1e-3, "max step=" + num(max_step));
    o.require(r <= 1e-3, "residual=" + num(r) + " J");
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto spd_s = scara_mass_spd_check(ScaraParams{}, 1000, 1);
    const auto spd_p = pendulum_mass_spd_check(PendulumParams{}, 1000, 1);
    const auto skew = skew_symmetry_check(ScaraParams{}, 1000, 1);
    const auto el = el_residual_check(PendulumParams{}, 100, 1, 0.5, 1e-4);
    o.require(spd_s.passed && spd_p.passed, "SPD failures scara=" + num(spd_s.residual) +
                                                " pendulum=" + num(spd_p.residual));
    o.require(skew.passed, "skew=" + num(skew.residual));
    o.require(el.passed, "EL=" + num(el.residual));
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto decay = [](double, const Vec<1>& x) { return -x; };
    double prev = std::abs(rk4(decay, 0.0, Vec<1>{{1.0}}, 1.0, 0.1).final_state()[0] - std::exp(-1.0));
    bool order_ok = true;
    std::string ratios;
    for (double h : {0.05, 0.025, 0.0125}) {
        const double cur =
            std::abs(rk4(decay, 0.0, Vec<1>{{1.0}}, 1.0, h).final_state()[0] - std::exp(-1.0));
        const double ratio = prev / cur;
        order_ok = order_ok && ratio >= 14.0 && ratio <= 18.0;
        ratios += (ratios.empty() ? "" : ",") + num(ratio);
        prev = cur;
    }
    o.require(order_ok, "rk4 ratios=" + ratios);

    {
        const Scenario s = builtin_scenario("scara-paper");
        const auto f = scara_rhs(ScaraParams{}, s.torque);
        const auto dev = max_deviation(dopri45(f, s.t0, Vec<8>{}, s.tf, s.solver_options),
                                       rk4(f, s.t0, Vec<8>{}, s.tf, 1e-4), f);
        o.require(dev <= 1e-4, "scara dopri45-rk4=" + num(dev));
    }
    {
        const Scenario s = builtin_scenario("pendulum-paper");
        const auto f = pendulum_rhs(PendulumParams{}, s.torque);
        const auto dev = max_deviation(dopri45(f, s.t0, Vec<4>{}, s.tf, s.solver_options),
                                       rk4(f, s.t0, Vec<4>{}, s.tf, 1e-4), f);
        o.require(dev <= 1e-4, "pendulum dopri45-rk4=" + num(dev));
    }
    SolverOptions tight;
    tight.rtol = 1e-8;
    tight.atol = 1e-10;
    const double err =
        std::abs(dopri45(decay, 0.0, Vec<1>{{1.0}}, 1.0, tight).final_state()[0] - std::exp(-1.0));
    o.require(err <= 1e-7, "dopri45 decay error=" + num(err));
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool parses(const fs::path& p, std::size_t columns) {
    try {
        std::istringstream in(slurp(p));
        const auto t = read_csv(in);
        return t.header.size() == columns && !t.rows.empty();
    } catch (const std::exception&) {
        return false;
    }
}

Outcome criterion7(const std::string& exe, const fs::path& dir) {
    Outcome o;
    const std::string q = "'" + exe + "'";
    const auto at = [&](const char* name) { return "'" + (dir / name).string() + "'"; };
    o.require(shell(q + " verify > /dev/null") == 0, "verify exit 0");

    const int a1 = shell(q + " scara --out " + at("a.csv") + " --plot " + at("a.svg"));
    const int a2 = shell(q + " scara --out " + at("a2.csv") + " --plot " + at("a2.svg"));
    const int b1 = shell(q + " pendulum --theta1 3.04 --out " + at("b.csv"));
    const int b2 = shell(q + " pendulum --theta1 3.04 --out " + at("b2.csv"));
    o.require(a1 == 0 && a2 == 0 && b1 == 0 && b2 == 0, "runs exit 0");
    o.require(parses(dir / "a.csv", 9) && parses(dir / "b.csv", 5), "CSV parseable");
    const std::string svg = slurp(dir / "a.svg");
    o.require(svg.rfind("<?xml", 0) == 0 && svg.find("</svg>") != std::string::npos,
              "SVG well-formed");
    o.require(slurp(dir / "a.csv") == slurp(dir / "a2.csv") &&
                  slurp(dir / "a.svg") == slurp(dir / "a2.svg") &&
                  slurp(dir / "b.csv") == slurp(dir / "b2.csv"),
              "byte-identical reruns");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-dynsim> [scratch-dir]\n";
        return 2;
    }
    const std::string exe = argv[1];
    const fs::path dir = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "dynsim_acceptance";
    fs::create_directories(dir);

    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 scara-paper joint 4 vs closed form", 1.0, criterion1},
        {"2 pendulum-paper equilibrium", 1.0, criterion2},
        {"3 pendulum energy conservation", 5.0, criterion3},
        {"4 scara power balance", 10.0, criterion4},
        {"5 structural physics", 5.0, criterion5},
        {"6 solver correctness", 10.0, criterion6},
        {"7 end-to-end CLI", 15.0, [&] { return criterion7(exe, dir); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failed += pass ? 0 : 1;
        std::printf("[%s] criterion %s (%.3fs / %.0fs budget%s):%s\n", pass ? "PASS" : "FAIL",
                    c.name, secs, c.budget_s, in_time ? "" : ", OVER BUDGET", o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
