#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "dynsim/analysis.hpp"
#include "dynsim/models.hpp"
#include "oracles.hpp"

using namespace dynsim;
using std::numbers::pi;

TEST_CASE("SCARA mass matrix entries", "[models][scara]") {
    const ScaraParams p;
    CHECK(p.I1 == Catch::Approx(0.30));
    CHECK(p.I4 == Catch::Approx(0.06));

    const Mat<4> M0 = scara_mass_matrix(p, Vec<4>{});
    CHECK(M0(0, 0) == Catch::Approx(13.1475).margin(1e-12));
    CHECK(M0(0, 2) == Catch::Approx(0.21));
    CHECK(M0(3, 3) == 3.0);
    CHECK(M0(0, 3) == 0.0);
    CHECK(M0(2, 3) == 0.0);

    const Mat<4> Mpi = scara_mass_matrix(p, Vec<4>{{0.0, pi, 0.0, 0.0}});
    CHECK(Mpi(0, 0) == Catch::Approx(3.5475).margin(1e-12));
    // M12 = I2+I3+I4 + m2(lc2^2 + l1 lc2 cos) + (m3+m4)(l2^2 + l1 l2 cos)
    CHECK(M0(0, 1) == Catch::Approx(1.17 + 12 * (0.04 + 0.1) + 6 * (0.16 + 0.2)));
    CHECK(M0(1, 1) == Catch::Approx(1.17 + 12 * 0.04 + 6 * 0.16));
}

TEST_CASE("SCARA Coriolis matrix", "[models][scara]") {
    const ScaraParams p;
    CHECK(scara_coriolis(p, Vec<4>{{0.3, 1.1, -0.4, 2.0}}, Vec<4>{}) == Mat<4>::zero());
    const Mat<4> c0 = scara_coriolis(p, Vec<4>{{0.3, 0.0, 1.0, 0.0}}, Vec<4>{{1, 2, 3, 4}});
    CHECK(max_abs(c0) == 0.0);

    const Mat<4> C = scara_coriolis(p, Vec<4>{{0.0, pi / 2, 0.0, 0.0}}, Vec<4>{{1, 1, 0, 0}});
    CHECK(C(0, 0) == Catch::Approx(-2.4).margin(1e-12));
    CHECK(C(0, 1) == Catch::Approx(-4.8).margin(1e-12));
    CHECK(C(1, 0) == Catch::Approx(2.4).margin(1e-12));
    CHECK(C(1, 1) == 0.0);
}

TEST_CASE("SCARA gravity vector", "[models][scara]") {
    ScaraParams p;
    CHECK(scara_gravity(p) == Vec<4>{{0, 0, 0, 3.0 * 9.81}});
    CHECK(scara_gravity(p)[3] == Catch::Approx(29.43));
    p.m4 = 0.0;
    CHECK(scara_gravity(p) == Vec<4>{});
    p = {};
    p.g = 0.0;
    CHECK(scara_gravity(p) == Vec<4>{});
}

TEST_CASE("SCARA accelerations at rest", "[models][scara]") {
    const ScaraParams p;
    const Vec<4> zero{};
    const Vec<4> hold = scara_accel(p, zero, zero, Vec<4>{{0, 0, 0, 3.0 * 9.81}});
    CHECK(norm_inf(hold) <= 1e-14);

    const Vec<4> fall = scara_accel(p, zero, zero, zero);
    CHECK(fall[3] == Catch::Approx(-9.81).margin(1e-12));
    CHECK(std::abs(fall[0]) + std::abs(fall[1]) + std::abs(fall[2]) == 0.0);

    const Vec<4> driven = scara_accel(p, zero, zero, Vec<4>{{3, 2, 0, 30}});
    CHECK(driven[3] == Catch::Approx(0.19).margin(1e-12));
    const Vec<4> ref = oracle::gauss_solve(scara_mass_matrix(p, zero), Vec<4>{{3, 2, 0, 30 - 29.43}});
    CHECK(norm_inf(driven - ref) <= 1e-12);
}

TEST_CASE("SCARA accel satisfies the matrix equation of motion", "[models][scara][property]") {
    const ScaraParams p;
    Sampler rng(5);
    for (int k = 0; k < 200; ++k) {
        const ScaraState s = sample_state<4>(rng);
        const Vec<4> tau = rng.uniform_vec<4>(-5.0, 5.0);
        const Vec<4> a = scara_accel(p, s.q, s.dq, tau);
        Vec<4> lhs = mat_vec(scara_mass_matrix(p, s.q), a) +
                     mat_vec(scara_coriolis(p, s.q, s.dq), s.dq) + scara_gravity(p);
        for (std::size_t i = 0; i < 4; ++i) lhs[i] += p.friction()[i] * s.dq[i];
        REQUIRE(norm_inf(lhs - tau) <= 1e-12);
    }
}

TEST_CASE("SCARA energy", "[models][scara]") {
    const ScaraParams p;
    const auto rest = scara_energy(p, {});
    CHECK(rest.kinetic == 0.0);
    CHECK(rest.potential == 0.0);
    CHECK(rest.total == 0.0);

    const auto lift = scara_energy(p, {Vec<4>{}, Vec<4>{{0, 0, 0, 1}}});
    CHECK(lift.kinetic == Catch::Approx(1.5));
    const auto high = scara_energy(p, {Vec<4>{{0, 0, 0, 2}}, Vec<4>{}});
    CHECK(high.potential == Catch::Approx(58.86));
    CHECK(high.kinetic == 0.0);

    Sampler rng(9);
    for (int k = 0; k < 200; ++k) {
        const auto e = scara_energy(p, sample_state<4>(rng));
        REQUIRE(e.kinetic >= 0.0);
        REQUIRE(e.total == e.kinetic + e.potential);
    }
}

TEST_CASE("mass matrices are symmetric and positive definite", "[models][property]") {
    const ScaraParams sp;
    const PendulumParams pp;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int k = 0; k < 1000; ++k) {
        const double a = angle(rng);
        const Mat<4> M = scara_mass_matrix(sp, Vec<4>{{angle(rng), a, angle(rng), 0.3}});
        REQUIRE(M == transpose(M));
        REQUIRE(is_positive_definite(M));
        const Mat<2> P = pendulum_mass_matrix(pp, a);
        REQUIRE(P == transpose(P));
        REQUIRE(is_positive_definite(P));
    }
}

TEST_CASE("SCARA Mdot - 2C is skew-symmetric", "[models][scara][property]") {
    const ScaraParams p;
    Sampler rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const ScaraState s = sample_state<4>(rng);
        REQUIRE(skew_symmetry_residual(p, s, [](const auto& pp, const auto& q, const auto& dq) {
                    return scara_coriolis(pp, q, dq);
                }) <= 1e-5);
    }
}

TEST_CASE("pendulum mass matrix", "[models][pendulum]") {
    const PendulumParams p;
    const Mat<2> M = pendulum_mass_matrix(p, 0.0);
    CHECK(M(0, 0) == Catch::Approx(0.016779).margin(1e-6));
    CHECK(M(0, 1) == Catch::Approx(0.0089279).margin(1e-6));
    CHECK(M(1, 0) == M(0, 1));
    CHECK(M(1, 1) == Catch::Approx(0.0091838).margin(1e-6));

    const Mat<2> side = pendulum_mass_matrix(p, pi / 2);
    CHECK(std::abs(side(0, 1)) <= 1e-18);
    CHECK(side(0, 0) == Catch::Approx(0.0052 + 0.2866 * (0.201 * 0.201 + 0.15498 * 0.15498)));
}

TEST_CASE("pendulum bias terms", "[models][pendulum]") {
    const PendulumParams p;
    CHECK(pendulum_bias(p, {}) == Vec<2>{});
    const Vec<2> side = pendulum_bias(p, {Vec<2>{{0, pi / 2}}, Vec<2>{}});
    CHECK(side[0] == 0.0);
    CHECK(side[1] == Catch::Approx(-0.4357334).margin(1e-6));
    const Vec<2> hang = pendulum_bias(p, {Vec<2>{{0, pi}}, Vec<2>{}});
    CHECK(norm_inf(hang) <= 1e-15);
}

TEST_CASE("pendulum accelerations", "[models][pendulum]") {
    const PendulumParams p;
    CHECK(pendulum_accel(p, {}, 0.0) == Vec<2>{});

    const Vec<2> a = pendulum_accel(p, {}, 0.01);
    const Vec<2> ref = oracle::solve_2x2(pendulum_mass_matrix(p, 0.0), Vec<2>{{0.01, 0.0}});
    CHECK(norm_inf(a - ref) <= 1e-12);
    CHECK(a[0] > 0.0);
    CHECK(a[1] < 0.0);  // the pendulum reacts against the arm

    CHECK(norm_inf(pendulum_accel(p, {Vec<2>{{0, pi}}, Vec<2>{}}, 0.0)) <= 1e-12);
}

TEST_CASE("pendulum accel against the scalar equations of motion", "[models][pendulum][property]") {
    const PendulumParams p;
    Sampler rng(77);
    for (int k = 0; k < 1000; ++k) {
        const PendulumState s = sample_state<2>(rng);
        const double tau = rng.uniform(-1.0, 1.0);
        const Vec<2> dd = pendulum_accel(p, s, tau);
        const double sn = std::sin(s.q[1]), cs = std::cos(s.q[1]);
        const double w0 = s.dq[0], w1 = s.dq[1];
        // Arm equation with the sin^2 inertia term, then the pendulum equation.
        const double arm = p.I0 * dd[0] + p.L0 * p.L0 * p.m1 * dd[0] +
                           p.l1 * p.l1 * p.m1 * (dd[0] * sn * sn + 2 * w0 * w1 * sn * cs) +
                           p.L0 * p.l1 * p.m1 * (dd[1] * cs - w1 * w1 * sn);
        const double pend = p.I1 * dd[1] + p.l1 * p.l1 * p.m1 * dd[1] +
                            p.L0 * p.l1 * p.m1 * dd[0] * cs -
                            p.l1 * p.l1 * p.m1 * w0 * w0 * sn * cs - p.m1 * p.g * p.l1 * sn;
        REQUIRE(std::abs(arm - tau) <= 1e-10);
        REQUIRE(std::abs(pend) <= 1e-10);
    }
}

TEST_CASE("pendulum energy and Lagrangian", "[models][pendulum]") {
    const PendulumParams p;
    const auto z = pendulum_energy(p, {});
    CHECK(z.kinetic == 0.0);
    CHECK(z.potential == 0.0);
    CHECK(pendulum_lagrangian(p, {}) == 0.0);

    const PendulumState hang{Vec<2>{{0, pi}}, Vec<2>{}};
    CHECK(pendulum_energy(p, hang).potential == Catch::Approx(-0.8714668).margin(1e-6));
    CHECK(pendulum_lagrangian(p, hang) == Catch::Approx(0.8714668).margin(1e-6));

    const PendulumState spin{Vec<2>{}, Vec<2>{{1, 0}}};
    CHECK(pendulum_energy(p, spin).kinetic == Catch::Approx(0.0083896).margin(1e-6));

    Sampler rng(13);
    for (int k = 0; k < 500; ++k) {
        const PendulumState s = sample_state<2>(rng);
        const auto e = pendulum_energy(p, s);
        REQUIRE(e.kinetic >= 0.0);
        REQUIRE(std::abs(pendulum_lagrangian(p, s) - (e.kinetic - e.potential)) <= 1e-12);
        // Kinetic energy is the quadratic form of the mass matrix.
        const double quad = 0.5 * dot(s.dq, mat_vec(pendulum_mass_matrix(p, s.q[1]), s.dq));
        REQUIRE(std::abs(e.kinetic - quad) <= 1e-14);
    }
}

TEST_CASE("pendulum gravity term is the potential gradient", "[models][pendulum][property]") {
    const PendulumParams p;
    constexpr double h = 1e-6;
    Sampler rng(21);
    for (int k = 0; k < 200; ++k) {
        const double th = rng.uniform(-pi, pi);
        const auto U = [&](double t1) {
            return pendulum_energy(p, {Vec<2>{{0.0, t1}}, Vec<2>{}}).potential;
        };
        const double dU = (U(th + h) - U(th - h)) / (2 * h);
        const double gravity_entry = pendulum_bias(p, {Vec<2>{{0.0, th}}, Vec<2>{}})[1];
        REQUIRE(std::abs(gravity_entry - dU) <= 1e-6);
    }
}

TEST_CASE("parameter validation", "[models]") {
    CHECK_NOTHROW(ScaraParams{}.validate());
    CHECK_NOTHROW(PendulumParams{}.validate());
    ScaraParams sp;
    sp.m2 = 0.0;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = {};
    sp.B3 = -0.1;
    CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
    sp = {};
    sp.B3 = 0.0;
    CHECK_NOTHROW(sp.validate());
    PendulumParams pp;
    pp.l1 = 0.5;
    CHECK_THROWS_AS(pp.validate(), std::invalid_argument);
}

TEST_CASE("negative inertia surfaces as NotPositiveDefinite", "[models]") {
    PendulumParams p;
    p.I0 = -0.1;
    CHECK_THROWS_AS(pendulum_accel(p, {}, 0.0), NotPositiveDefinite);
    ScaraParams s;
    s.m4 = -1.0;
    CHECK_THROWS_AS(scara_accel(s, Vec<4>{}, Vec<4>{}, Vec<4>{}), NotPositiveDefinite);
}
