#pragma once

// Finite-difference residual oracle for the closed-form benchmark value: the
// nonlinear operator is evaluated in primitive (non-divergence) form with
// central differences and the control supremum is taken exactly on the
// resulting alpha-quadratic. Fully independent of the assembly code paths.

#include "hjbfit/merton.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hjbfit_test {

struct ResidualProbe {
    double residual = 0.0; // -v_tau + sup_alpha L^alpha v
    double scale = 0.0;    // magnitude of the participating terms
};

inline ResidualProbe merton_pde_residual(const hjbfit::MertonParams& prm, double rho, double tau,
                                         std::array<double, 3> x, double rel_step) {
    using hjbfit::exact_value;
    const auto v = [&](double t, double a, double b, double c) {
        const std::array<double, 3> p{a, b, c};
        return exact_value(prm, rho, t, p);
    };
    const double dx = rel_step * x[0];
    const double dy = rel_step * x[1];
    const double dz = rel_step * x[2];
    const double dt = rel_step * std::max(prm.horizon, 1.0);

    const double v0 = v(tau, x[0], x[1], x[2]);
    const double v_tau = (v(tau + dt, x[0], x[1], x[2]) - v(tau - dt, x[0], x[1], x[2])) / (2 * dt);
    const double v_x = (v(tau, x[0] + dx, x[1], x[2]) - v(tau, x[0] - dx, x[1], x[2])) / (2 * dx);
    const double v_y = (v(tau, x[0], x[1] + dy, x[2]) - v(tau, x[0], x[1] - dy, x[2])) / (2 * dy);
    const double v_z = (v(tau, x[0], x[1], x[2] + dz) - v(tau, x[0], x[1], x[2] - dz)) / (2 * dz);
    const double v_xx =
        (v(tau, x[0] + dx, x[1], x[2]) - 2 * v0 + v(tau, x[0] - dx, x[1], x[2])) / (dx * dx);
    const double v_yy =
        (v(tau, x[0], x[1] + dy, x[2]) - 2 * v0 + v(tau, x[0], x[1] - dy, x[2])) / (dy * dy);
    const double v_zz =
        (v(tau, x[0], x[1], x[2] + dz) - 2 * v0 + v(tau, x[0], x[1], x[2] - dz)) / (dz * dz);
    const double v_xy = (v(tau, x[0] + dx, x[1] + dy, x[2]) - v(tau, x[0] + dx, x[1] - dy, x[2]) -
                         v(tau, x[0] - dx, x[1] + dy, x[2]) + v(tau, x[0] - dx, x[1] - dy, x[2])) /
                        (4 * dx * dy);
    const double v_xz = (v(tau, x[0] + dx, x[1], x[2] + dz) - v(tau, x[0] + dx, x[1], x[2] - dz) -
                         v(tau, x[0] - dx, x[1], x[2] + dz) + v(tau, x[0] - dx, x[1], x[2] - dz)) /
                        (4 * dx * dz);
    const double v_yz = (v(tau, x[0], x[1] + dy, x[2] + dz) - v(tau, x[0], x[1] + dy, x[2] - dz) -
                         v(tau, x[0], x[1] - dy, x[2] + dz) + v(tau, x[0], x[1] - dy, x[2] - dz)) /
                        (4 * dy * dz);

    const double s2 = prm.sigma * prm.sigma;
    const double quad = 0.5 * s2 * x[0] * x[0] * v_xx;
    const double lin = s2 * x[0] * x[1] * v_xy + s2 * x[0] * x[2] * v_xz + (prm.mu1 - prm.r1) * x[0] * v_x;
    const double base = 0.5 * s2 * x[1] * x[1] * v_yy + 0.5 * s2 * x[2] * x[2] * v_zz +
                        s2 * x[1] * x[2] * v_yz + prm.r1 * x[0] * v_x + prm.mu2 * x[1] * v_y +
                        prm.mu3 * x[2] * v_z;
    const double astar = quad < 0.0 ? std::clamp(-lin / (2.0 * quad), 0.0, 1.0) : 1.0;
    const double sup = base + lin * astar + quad * astar * astar;

    ResidualProbe probe;
    probe.residual = -v_tau + sup;
    probe.scale = std::abs(v_tau) + std::abs(base) + std::abs(lin) + std::abs(quad) + std::abs(v0);
    return probe;
}

} // namespace hjbfit_test
