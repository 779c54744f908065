#include "hjbfit/merton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjbfit {

MertonParams MertonParams::table1() {
    return MertonParams{};
}

MertonParams MertonParams::table2() {
    MertonParams p;
    p.mu2 = 0.0656;
    p.mu3 = 0.0655;
    p.p = 0.17;
    p.horizon = 1.5;
    p.intervals = {8, 9, 10};
    p.r2 = 0.0448 / 3.0;
    p.r3 = 0.0447;
    return p;
}

void MertonParams::check() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("MertonParams: p must lie in (0,1)");
    if (!(mu1 > r1)) throw std::invalid_argument("MertonParams: mu1 must exceed r1");
    if (!(sigma > 0.0)) throw std::invalid_argument("MertonParams: sigma must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("MertonParams: horizon must be positive");
    for (double x : x_max)
        if (!(x > 0.0)) throw std::invalid_argument("MertonParams: domain bounds must be positive");
}

double merton_growth_rate(const MertonParams& prm, double alpha) {
    const double s2 = prm.sigma * prm.sigma;
    return prm.r1 + (prm.mu1 - prm.r1) * alpha + prm.mu2 + prm.mu3 +
           0.5 * s2 * alpha * alpha * (prm.p - 1.0) + s2 * (prm.p - 1.0) +
           2.0 * s2 * alpha * prm.p + s2 * prm.p;
}

AnsatzSolution compute_rho(const MertonParams& prm) {
    prm.check();
    const double s2 = prm.sigma * prm.sigma;
    AnsatzSolution sol;
    sol.params = prm;
    sol.alpha_star = std::clamp(((prm.mu1 - prm.r1) + 2.0 * s2 * prm.p) / (s2 * (1.0 - prm.p)), 0.0, 1.0);
    sol.rho = merton_growth_rate(prm, sol.alpha_star);
    return sol;
}

AnsatzSolution compute_rho(const MertonParams& prm, const ControlSet& controls) {
    controls.check();
    AnsatzSolution sol = compute_rho(prm);
    double scan_best = -std::numeric_limits<double>::infinity();
    for (double a : controls.samples) scan_best = std::max(scan_best, merton_growth_rate(prm, a));
    if (scan_best > sol.rho + 1e-9 * (1.0 + std::abs(sol.rho)))
        throw std::logic_error("compute_rho: sample scan exceeded the closed-form maximum");
    return sol;
}

double exact_value(const MertonParams& prm, double rho, double tau, std::span<const double> point) {
    double prod = 1.0;
    for (double x : point) {
        if (x < 0.0) throw std::invalid_argument("exact_value: coordinates must be nonnegative");
        prod *= std::pow(x, prm.p) / prm.p;
    }
    const double shift = prm.psi == PsiConvention::kAsPrinted ? prm.horizon : 0.0;
    return std::exp(prm.p * rho * (tau - shift)) * prod;
}

double AnsatzSolution::value(double tau, std::span<const double> point) const {
    return exact_value(params, rho, tau, point);
}

ControlProblem merton_problem(const MertonParams& prm) {
    prm.check();
    const double s2 = prm.sigma * prm.sigma;
    const AnsatzSolution ansatz = compute_rho(prm);

    ControlProblem pb;
    pb.dim = 3;
    pb.horizon = prm.horizon;

    pb.a_bar = [s2](int axis, double, std::span<const double>, double alpha) {
        return axis == 0 ? 0.5 * s2 * alpha * alpha : 0.5 * s2;
    };
    pb.drift = [prm, s2](int axis, double, std::span<const double>, double alpha) {
        switch (axis) {
            case 0: return prm.r1 + (prm.mu1 - prm.r1) * alpha - s2 * alpha - s2 * alpha * alpha;
            case 1: return prm.mu2 - 0.5 * s2 * alpha - 1.5 * s2;
            default: return prm.mu3 - 0.5 * s2 * alpha - 1.5 * s2;
        }
    };
    // a_12 = s2 alpha x y / 2, a_13 = s2 alpha x z / 2, a_23 = s2 y z / 2,
    // each divided by the skipped coordinate so that d_ir * xyz = a_ir
    pb.cross = [s2](int i, int r, double, std::span<const double> x, double alpha) {
        if (i > r) std::swap(i, r);
        if (i == 0 && r == 1) return 0.5 * s2 * alpha / x[2];
        if (i == 0 && r == 2) return 0.5 * s2 * alpha / x[1];
        return 0.5 * s2 / x[0];
    };
    pb.zeroth = [prm, s2](double, std::span<const double>, double alpha) {
        return -(prm.r1 + (prm.mu1 - prm.r1) * alpha - 2.0 * s2 * alpha - s2 * alpha * alpha +
                 prm.mu2 + prm.mu3 - 3.0 * s2);
    };
    pb.source = nullptr;
    pb.terminal = [prm](std::span<const double> x) {
        double prod = 1.0;
        for (double c : x) prod *= std::pow(c, prm.p) / prm.p;
        return prod;
    };
    pb.boundary = [ansatz](double tau, std::span<const double> x) { return ansatz.value(tau, x); };
    pb.boundary_policy = BoundaryPolicy(3, BoundaryPolicy::Mode::kCallback);
    for (int d = 0; d < 3; ++d) pb.boundary_policy.set(d, 0, BoundaryPolicy::Mode::kZero);
    return pb;
}

} // namespace hjbfit
