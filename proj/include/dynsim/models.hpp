#pragma once
// Plant models: a 4-DOF SCARA manipulator (three horizontal revolute joints
// and a vertical prismatic joint) and a rotational (Furuta) inverted
// pendulum. Both are written as M(q) qdd + h(q, qd) = tau and solved for qdd
// with a Cholesky factorization of the mass matrix.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "dynsim/smallmat.hpp"

namespace dynsim {

template <std::size_t N>
struct State {
    Vec<N> q;   ///< generalized coordinates
    Vec<N> dq;  ///< generalized velocities
};

using ScaraState = State<4>;
using PendulumState = State<2>;

struct EnergyBreakdown {
    double kinetic = 0.0;    ///< [J]
    double potential = 0.0;  ///< [J]
    double total = 0.0;      ///< kinetic + potential [J]
};

inline EnergyBreakdown make_energy(double kinetic, double potential) noexcept {
    return {kinetic, potential, kinetic + potential};
}

// ---------------------------------------------------------------------------
// SCARA
// ---------------------------------------------------------------------------

/// SCARA constants. Defaults are the reference robot: m = (15, 12, 3, 3) kg,
/// l1 = 0.5 m, l2 = 0.4 m, lc1 = 0.25 m, lc2 = 0.2 m,
/// I = (0.02 m1, 0.08 m2, 0.05 m3, 0.02 m4), B_i = 0.5, g = 9.81.
struct ScaraParams {
    double m1 = 15.0, m2 = 12.0, m3 = 3.0, m4 = 3.0;  // [kg]
    double l1 = 0.50, l2 = 0.40;                      // link lengths [m]
    double lc1 = 0.25, lc2 = 0.20;                    // centre-of-mass offsets [m]
    double I1 = 0.02 * 15.0, I2 = 0.08 * 12.0, I3 = 0.05 * 3.0, I4 = 0.02 * 3.0;
    double B1 = 0.5, B2 = 0.5, B3 = 0.5, B4 = 0.5;  // viscous friction
    double g = 9.81;                                // [m/s^2]

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const {
        const auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("ScaraParams: ") + name + " must be > 0");
        };
        const auto non_negative = [](double v, const char* name) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("ScaraParams: ") + name +
                                            " must be >= 0");
        };
        positive(m1, "m1"), positive(m2, "m2"), positive(m3, "m3"), positive(m4, "m4");
        positive(l1, "l1"), positive(l2, "l2"), positive(lc1, "lc1"), positive(lc2, "lc2");
        positive(I1, "I1"), positive(I2, "I2"), positive(I3, "I3"), positive(I4, "I4");
        non_negative(B1, "B1"), non_negative(B2, "B2"), non_negative(B3, "B3");
        non_negative(B4, "B4");
        positive(g, "g");
    }

    Vec<4> friction() const noexcept { return Vec<4>{{B1, B2, B3, B4}}; }
};

/// Mass matrix. The upper triangle follows the published entries; the lower
/// triangle is mirrored so M == M^T bit for bit.
inline Mat<4> scara_mass_matrix(const ScaraParams& p, const Vec<4>& q) noexcept {
    const double c2 = std::cos(q[1]);
    const double m34 = p.m3 + p.m4;
    const double i34 = p.I3 + p.I4;

    const double M11 = p.I1 + p.I2 + p.I3 + p.I4 + p.m1 * p.lc1 * p.lc1 + p.m2 * p.l1 * p.l1 +
                       p.m2 * (p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) +
                       m34 * (p.l1 * p.l1 + p.l2 * p.l2 + 2.0 * p.l1 * p.l2 * c2);
    const double M12 = p.I2 + p.I3 + p.I4 + p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) +
                       m34 * (p.l2 * p.l2 + p.l1 * p.l2 * c2);
    const double M22 = p.I2 + p.I3 + p.I4 + p.m2 * p.lc2 * p.lc2 + m34 * p.l2 * p.l2;

    Mat<4> M{};
    M(0, 0) = M11;
    M(0, 1) = M(1, 0) = M12;
    M(0, 2) = M(2, 0) = i34;
    M(1, 1) = M22;
    M(1, 2) = M(2, 1) = i34;
    M(2, 2) = i34;
    M(3, 3) = p.m4;
    return M;
}

/// Coriolis/centrifugal matrix with the joint velocities folded into its
/// entries, so the generalized force is C(q, dq) * dq. Only C11, C12, C21
/// are non-zero.
inline Mat<4> scara_coriolis(const ScaraParams& p, const Vec<4>& q, const Vec<4>& dq) noexcept {
    const double h = (p.m2 * p.l1 * p.lc2 + (p.m3 + p.m4) * p.l1 * p.l2) * std::sin(q[1]);
    Mat<4> C{};
    C(0, 0) = -h * dq[1];
    C(0, 1) = -h * (dq[0] + dq[1]);
    C(1, 0) = h * dq[0];
    return C;
}

/// Gravity acts only on the vertical prismatic joint.
inline Vec<4> scara_gravity(const ScaraParams& p) noexcept {
    return Vec<4>{{0.0, 0.0, 0.0, p.m4 * p.g}};
}

/// Joint accelerations from M qdd = tau - C dq - B dq - g.
inline Vec<4> scara_accel(const ScaraParams& p, const Vec<4>& q, const Vec<4>& dq,
                          const Vec<4>& tau) {
    const Mat<4> M = scara_mass_matrix(p, q);
    const Vec<4> cdq = mat_vec(scara_coriolis(p, q, dq), dq);
    const Vec<4> g = scara_gravity(p);
    const Vec<4> B = p.friction();
    Vec<4> rhs{};
    for (std::size_t i = 0; i < 4; ++i) rhs[i] = tau[i] - cdq[i] - B[i] * dq[i] - g[i];
    return cholesky_solve(M, rhs);
}

/// K = 1/2 dq^T M(q) dq, U = m4 g q4.
inline EnergyBreakdown scara_energy(const ScaraParams& p, const ScaraState& s) noexcept {
    const double kinetic = 0.5 * dot(s.dq, mat_vec(scara_mass_matrix(p, s.q), s.dq));
    const double potential = p.m4 * p.g * s.q[3];
    return make_energy(kinetic, potential);
}

// ---------------------------------------------------------------------------
// Rotational inverted pendulum
// ---------------------------------------------------------------------------

/// Furuta pendulum constants. theta0 is the driven arm, theta1 the free
/// pendulum measured from upright. Defaults are the reference rig.
struct PendulumParams {
    double m1 = 0.2866;   ///< pendulum mass [kg]
    double L0 = 0.201;    ///< arm length [m]
    double L1 = 0.30997;  ///< pendulum length [m]
    double l1 = 0.15498;  ///< pivot to pendulum centre of mass [m]
    double I0 = 0.0052;   ///< arm inertia [kg m^2]
    double I1 = 0.0023;   ///< pendulum inertia [kg m^2]
    double g = 9.81;

    void validate() const {
        const auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("PendulumParams: ") + name +
                                            " must be > 0");
        };
        positive(m1, "m1"), positive(L0, "L0"), positive(L1, "L1"), positive(l1, "l1");
        positive(I0, "I0"), positive(I1, "I1"), positive(g, "g");
        if (l1 > L1) throw std::invalid_argument("PendulumParams: l1 must be <= L1");
    }
};

inline Mat<2> pendulum_mass_matrix(const PendulumParams& p, double theta1) noexcept {
    const double s = std::sin(theta1);
    const double c = std::cos(theta1);
    const double ml2 = p.m1 * p.l1 * p.l1;
    Mat<2> M{};
    M(0, 0) = p.I0 + p.L0 * p.L0 * p.m1 + ml2 * s * s;
    M(0, 1) = M(1, 0) = p.L0 * p.l1 * p.m1 * c;
    M(1, 1) = p.I1 + ml2;
    return M;
}

/// Velocity and gravity terms b such that M qdd + b = (tau, 0).
inline Vec<2> pendulum_bias(const PendulumParams& p, const PendulumState& st) noexcept {
    const double s = std::sin(st.q[1]);
    const double c = std::cos(st.q[1]);
    const double w0 = st.dq[0];
    const double w1 = st.dq[1];
    const double ml2 = p.m1 * p.l1 * p.l1;
    const double arm_coupling = p.L0 * p.l1 * p.m1;
    return Vec<2>{{2.0 * ml2 * w0 * w1 * s * c - arm_coupling * w1 * w1 * s,
                   -ml2 * w0 * w0 * s * c - p.m1 * p.g * p.l1 * s}};
}

/// Torque drives the arm only; the pendulum joint is passive.
inline Vec<2> pendulum_accel(const PendulumParams& p, const PendulumState& st, double tau) {
    const Vec<2> b = pendulum_bias(p, st);
    return cholesky_solve(pendulum_mass_matrix(p, st.q[1]), Vec<2>{{tau - b[0], -b[1]}});
}

/// U = m1 g l1 (cos theta1 - 1): zero upright, -2 m1 g l1 hanging.
inline EnergyBreakdown pendulum_energy(const PendulumParams& p, const PendulumState& st) noexcept {
    const double s = std::sin(st.q[1]);
    const double c = std::cos(st.q[1]);
    const double w0 = st.dq[0];
    const double w1 = st.dq[1];
    const double kinetic =
        0.5 * p.I0 * w0 * w0 + 0.5 * p.I1 * w1 * w1 +
        0.5 * p.m1 *
            (p.L0 * p.L0 * w0 * w0 + p.l1 * p.l1 * (w1 * w1 + w0 * w0 * s * s) +
             2.0 * p.L0 * p.l1 * w0 * w1 * c);
    const double potential = p.m1 * p.g * p.l1 * (c - 1.0);
    return make_energy(kinetic, potential);
}

using ModelParams = std::variant<ScaraParams, PendulumParams>;

inline double pendulum_lagrangian(const PendulumParams& p, const PendulumState& st) noexcept {
    const EnergyBreakdown e = pendulum_energy(p, st);
    return e.kinetic - e.potential;
}

}  // namespace dynsim
