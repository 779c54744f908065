#include "hjbfit/merton.hpp"

#include "merton_residual.hpp"

#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <random>

using namespace hjbfit;

TEST_CASE("parameter invariants") {
    MertonParams prm = MertonParams::table1();
    CHECK_NOTHROW(prm.check());
    prm.p = 1.2;
    CHECK_THROWS_AS(prm.check(), std::invalid_argument);
    prm = MertonParams::table1();
    prm.mu1 = prm.r1;
    CHECK_THROWS_AS(prm.check(), std::invalid_argument);
    prm = MertonParams::table1();
    prm.sigma = 0.0;
    CHECK_THROWS_AS(prm.check(), std::invalid_argument);
}

TEST_CASE("table presets carry the benchmark parameters") {
    const MertonParams t1 = MertonParams::table1();
    CHECK(t1.r1 == 0.0449);
    CHECK(t1.mu2 == 0.067);
    CHECK(t1.p == 0.13);
    CHECK(t1.horizon == 1.0);
    CHECK(t1.intervals == std::array{10, 10, 10});
    CHECK(t1.x_max == std::array{0.5, 0.25, 0.5});

    const MertonParams t2 = MertonParams::table2();
    CHECK(t2.mu2 == 0.0656);
    CHECK(t2.mu3 == 0.0655);
    CHECK(t2.p == 0.17);
    CHECK(t2.horizon == 1.5);
    CHECK(t2.intervals == std::array{8, 9, 10});
    CHECK(t2.r2 == doctest::Approx(0.0448 / 3.0)); // recorded, unused by the model
    CHECK(t2.r3 == 0.0447);
}

TEST_CASE("coefficient values at the control endpoints") {
    const MertonParams prm = MertonParams::table1();
    const ControlProblem pb = merton_problem(prm);
    const double s2 = prm.sigma * prm.sigma;
    const std::array<double, 3> x{0.2, 0.1, 0.3};

    CHECK(pb.a_bar(0, 0.0, x, 0.0) == 0.0); // degenerate sample, flagged by validate
    CHECK(pb.a_bar(0, 0.0, x, 1.0) == doctest::Approx(0.5 * s2).epsilon(1e-14));
    CHECK(pb.a_bar(0, 0.0, x, 1.0) == doctest::Approx(0.032181845).epsilon(1e-7));

    // c at alpha = 0 comes out positive: the warning path of the hypotheses
    const double c0 = pb.zeroth(0.0, x, 0.0);
    CHECK(c0 == doctest::Approx(-(prm.r1 + prm.mu2 + prm.mu3 - 3.0 * s2)).epsilon(1e-14));
    CHECK(c0 > 0.0);
    CHECK(c0 == doctest::Approx(0.0151910693).epsilon(1e-6));
}

TEST_CASE("growth rate maximizer") {
    const MertonParams prm = MertonParams::table1();
    const ControlSet cs = ControlSet::uniform(0.0, 1.0, 100001);
    const AnsatzSolution sol = compute_rho(prm, cs);
    CHECK(sol.alpha_star == doctest::Approx(0.670302956902).epsilon(1e-9));
    CHECK(sol.alpha_star > 0.0);
    CHECK(sol.alpha_star < 1.0);

    // dense scan agrees within one sample spacing and 1e-12 in value
    double best_a = 0.0, best_v = -1e300;
    for (double a : cs.samples) {
        const double v = merton_growth_rate(prm, a);
        if (v > best_v) {
            best_v = v;
            best_a = a;
        }
    }
    CHECK(std::abs(best_a - sol.alpha_star) <= 1e-5 + 1e-12);
    CHECK(std::abs(best_v - sol.rho) <= 1e-12 * (1.0 + std::abs(sol.rho)));
}

TEST_CASE("growth rate maximizer clips at the upper control bound") {
    MertonParams prm = MertonParams::table1();
    prm.mu1 = prm.r1 + 10.0 * prm.sigma * prm.sigma;
    const AnsatzSolution sol = compute_rho(prm);
    CHECK(sol.alpha_star == 1.0);
    CHECK(sol.rho == doctest::Approx(merton_growth_rate(prm, 1.0)));
}

TEST_CASE("small utility exponent pushes the maximizer toward zero") {
    MertonParams prm = MertonParams::table1();
    prm.p = 1e-6;
    prm.mu1 = prm.r1 * (1.0 + 1e-12) + 1e-12; // mu1 barely above r1
    const AnsatzSolution sol = compute_rho(prm);
    // stationary point ~ 2 sigma^2 p / sigma^2 = 2p
    CHECK(sol.alpha_star == doctest::Approx(2.0 * prm.p).epsilon(1e-3));
    const ControlSet dense = ControlSet::uniform(0.0, 1.0, 100001);
    double best = -1e300;
    for (double a : dense.samples) best = std::max(best, merton_growth_rate(prm, a));
    CHECK(sol.rho == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("closed-form value function") {
    const MertonParams prm = MertonParams::table1();
    const AnsatzSolution sol = compute_rho(prm);
    const std::array<double, 3> x{0.2, 0.1, 0.3};

    // terminal condition: psi(0) = 1
    const double g = std::pow(x[0], prm.p) * std::pow(x[1], prm.p) * std::pow(x[2], prm.p) /
                     (prm.p * prm.p * prm.p);
    CHECK(sol.value(0.0, x) == doctest::Approx(g).epsilon(1e-14));

    const std::array<double, 3> face{0.2, 0.0, 0.3};
    CHECK(sol.value(0.7, face) == 0.0);

    // the printed variant shifts the exponent by the horizon
    MertonParams printed = prm;
    printed.psi = PsiConvention::kAsPrinted;
    const double shift = std::exp(-prm.p * sol.rho * prm.horizon);
    CHECK(exact_value(printed, sol.rho, 0.4, x) ==
          doctest::Approx(shift * sol.value(0.4, x)).epsilon(1e-13));

    CHECK_THROWS_AS(exact_value(prm, sol.rho, 0.0, std::array{-0.1, 0.2, 0.2}),
                    std::invalid_argument);
}

TEST_CASE("closed-form value satisfies the control PDE") {
    const MertonParams prm = MertonParams::table1();
    const AnsatzSolution sol = compute_rho(prm);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ux(0.05, 0.45), uy(0.05, 0.2), ut(0.05, 0.95);

    // probe step balancing truncation against double-precision roundoff
    const double step = 2e-4;
    for (int rep = 0; rep < 100; ++rep) {
        const std::array<double, 3> x{ux(rng), uy(rng), ux(rng)};
        const double tau = ut(rng);
        const auto probe = hjbfit_test::merton_pde_residual(prm, sol.rho, tau, x, step);
        CHECK(std::abs(probe.residual) <= 1e-8 * probe.scale);
    }

    // second-order decrease in the probe step
    const std::array<double, 3> x{0.2, 0.12, 0.3};
    const double r1 = std::abs(hjbfit_test::merton_pde_residual(prm, sol.rho, 0.4, x, 2e-3).residual);
    const double r2 = std::abs(hjbfit_test::merton_pde_residual(prm, sol.rho, 0.4, x, 1e-3).residual);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("benchmark problem wiring") {
    const MertonParams prm = MertonParams::table1();
    const ControlProblem pb = merton_problem(prm);
    CHECK(pb.dim == 3);
    CHECK(pb.horizon == prm.horizon);
    for (int d = 0; d < 3; ++d) {
        CHECK(pb.boundary_policy.mode(d, 0) == BoundaryPolicy::Mode::kZero);
        CHECK(pb.boundary_policy.mode(d, 1) == BoundaryPolicy::Mode::kCallback);
    }
    CHECK_FALSE(pb.source);

    // far-face data equals the closed-form value
    const AnsatzSolution sol = compute_rho(prm);
    const std::array<double, 3> x{0.5, 0.1, 0.3};
    CHECK(pb.boundary(0.6, x) == doctest::Approx(sol.value(0.6, x)).epsilon(1e-14));

    // drift block at both control endpoints
    const double s2 = prm.sigma * prm.sigma;
    CHECK(pb.drift(0, 0.0, x, 0.0) == doctest::Approx(prm.r1));
    CHECK(pb.drift(0, 0.0, x, 1.0) == doctest::Approx(prm.mu1 - 2.0 * s2));
    CHECK(pb.drift(1, 0.0, x, 0.5) == doctest::Approx(prm.mu2 - 0.25 * s2 - 1.5 * s2));
}
