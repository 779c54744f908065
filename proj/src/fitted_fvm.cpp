#include "hjbfit/fitted_fvm.hpp"

#include <cmath>
#include <stdexcept>

namespace hjbfit {

FittedFactor fitted_pair(double b_mid, double a_bar_mid, double x_lo, double x_hi) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo))
        throw std::invalid_argument("fitted_pair: need 0 < x_lo < x_hi");
    if (a_bar_mid < 0.0 || (a_bar_mid == 0.0 && b_mid == 0.0))
        throw std::invalid_argument("fitted_pair: diffusion factor must be positive, or drift nonzero");

    const double log_ratio = std::log(x_hi / x_lo);
    FittedFactor f;
    if (a_bar_mid > 0.0 && std::abs(b_mid) <= 1e-10 * std::max(1.0, std::abs(a_bar_mid))) {
        // degenerate exponent: x^beta differencing loses precision, use the limit
        f.beta = b_mid / a_bar_mid;
        f.up = f.down = a_bar_mid / log_ratio;
        return f;
    }
    f.beta = b_mid / a_bar_mid; // +-inf when a_bar_mid == 0
    const double t = f.beta * log_ratio;
    // up = b x_hi^beta / (x_hi^beta - x_lo^beta) = b / (1 - r^beta), r = x_lo/x_hi
    // down = b x_lo^beta / (x_hi^beta - x_lo^beta) = b / (e^t - 1)
    f.up = b_mid / (-std::expm1(-t));
    f.down = b_mid / std::expm1(t);
    if (std::isinf(t)) {
        // pure upwind limit; expm1(+-inf) resolves up, down needs the 0 branch
        if (t > 0) {
            f.up = b_mid;
            f.down = 0.0;
        } else {
            f.up = 0.0;
            f.down = -b_mid;
        }
    }
    return f;
}

namespace {

double cross_at(const ControlProblem& problem, int i, int r, double tau,
                std::span<const double> pt, double alpha) {
    return i < r ? problem.cross(i, r, tau, pt, alpha) : problem.cross(r, i, tau, pt, alpha);
}

} // namespace

namespace detail {

void add_cross_zeroth_source(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                             std::span<const int> idx, double alpha, StencilRow& out) {
    const int n = mesh.dim();
    std::span<const double> pt(out.point.data(), static_cast<size_t>(n));
    if (problem.has_cross()) {
        // pair (face axis r, difference axis s): the flux difference over the
        // two r-faces leaves d_rs * prod_{t != r} x_t * (v(+e_s) - v) / h_s
        for (int s = 0; s < n; ++s) {
            double coef = 0.0;
            for (int r = 0; r < n; ++r) {
                if (r == s) continue;
                double prod = 1.0;
                for (int t = 0; t < n; ++t)
                    if (t != r) prod *= pt[static_cast<size_t>(t)];
                coef += cross_at(problem, r, s, tau, pt, alpha) * prod;
            }
            coef /= mesh.axis(s).spacing(idx[static_cast<size_t>(s)]);
            out.up[static_cast<size_t>(s)] -= coef;
            out.diag += coef;
        }
    }
    out.diag -= problem.zeroth(tau, pt, alpha);
    out.source = problem.source_at(tau, pt, alpha);
}

} // namespace detail

void FittedFvmNd::row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                      std::span<const int> idx, double alpha, StencilRow& out) const {
    const int n = mesh.dim();
    out.reset(n);
    mesh.point(idx, out.point);

    for (int d = 0; d < n; ++d) {
        const Axis& ax = mesh.axis(d);
        const int q = idx[static_cast<size_t>(d)];
        const double h = ax.spacing(q);
        const double mid_up = ax.mid_above(q);
        const double mid_dn = ax.mid_below(q);
        const double node = ax.node(q);
        const double saved = out.point[static_cast<size_t>(d)];

        out.point[static_cast<size_t>(d)] = mid_up;
        const double b_up = problem.drift(d, tau, out.point, alpha);
        const double a_up = problem.a_bar(d, tau, out.point, alpha);
        const FittedFactor fu = fitted_pair(b_up, a_up, node, ax.node(q + 1));
        out.up[static_cast<size_t>(d)] = -mid_up * fu.up / h;
        out.diag += mid_up * fu.down / h;

        out.point[static_cast<size_t>(d)] = mid_dn;
        const double b_dn = problem.drift(d, tau, out.point, alpha);
        const double a_dn = problem.a_bar(d, tau, out.point, alpha);
        if (q >= 2 || !ax.starts_at_zero()) {
            const FittedFactor fd = fitted_pair(b_dn, a_dn, ax.node(q - 1), node);
            out.down[static_cast<size_t>(d)] = -mid_dn * fd.down / h;
            out.diag += mid_dn * fd.up / h;
        } else {
            // degenerate first cell: exact flux of the frozen-coefficient
            // problem on [0, x_1] averages the two endpoint values
            out.down[static_cast<size_t>(d)] = -mid_dn * (a_dn - b_dn) / (2.0 * h);
            out.diag += mid_dn * (a_dn + b_dn) / (2.0 * h);
        }
        out.point[static_cast<size_t>(d)] = saved;
    }

    detail::add_cross_zeroth_source(problem, mesh, tau, idx, alpha, out);
}

void FittedFvm3d::row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                      std::span<const int> idx, double alpha, StencilRow& out) const {
    if (mesh.dim() != 3)
        throw std::invalid_argument("FittedFvm3d: mesh must be three-dimensional");
    out.reset(3);
    mesh.point(idx, out.point);

    const Axis& axx = mesh.axis(0);
    const Axis& axy = mesh.axis(1);
    const Axis& axz = mesh.axis(2);
    const int i = idx[0];
    const int j = idx[1];
    const int k = idx[2];
    const double xi = out.point[0];
    const double yj = out.point[1];
    const double zk = out.point[2];
    const double hx = axx.spacing(i);
    const double hy = axy.spacing(j);
    const double hz = axz.spacing(k);
    std::span<double> pt(out.point.data(), 3);

    // --- x-direction fluxes ---
    pt[0] = axx.mid_above(i);
    {
        const FittedFactor f = fitted_pair(problem.drift(0, tau, pt, alpha),
                                           problem.a_bar(0, tau, pt, alpha), xi, axx.node(i + 1));
        out.up[0] = -axx.mid_above(i) * f.up / hx;
        out.diag += axx.mid_above(i) * f.down / hx;
    }
    pt[0] = axx.mid_below(i);
    if (i >= 2 || !axx.starts_at_zero()) {
        const FittedFactor f = fitted_pair(problem.drift(0, tau, pt, alpha),
                                           problem.a_bar(0, tau, pt, alpha), axx.node(i - 1), xi);
        out.down[0] = -axx.mid_below(i) * f.down / hx;
        out.diag += axx.mid_below(i) * f.up / hx;
    } else {
        const double ah = problem.a_bar(0, tau, pt, alpha);
        const double bh = problem.drift(0, tau, pt, alpha);
        const double x1 = axx.node(1);
        const double x2 = axx.node(2);
        out.down[0] = -x1 * (ah - bh) / (2.0 * x2);
        out.diag += x1 * (ah + bh) / (2.0 * x2);
    }
    pt[0] = xi;

    // --- y-direction fluxes ---
    pt[1] = axy.mid_above(j);
    {
        const FittedFactor f = fitted_pair(problem.drift(1, tau, pt, alpha),
                                           problem.a_bar(1, tau, pt, alpha), yj, axy.node(j + 1));
        out.up[1] = -axy.mid_above(j) * f.up / hy;
        out.diag += axy.mid_above(j) * f.down / hy;
    }
    pt[1] = axy.mid_below(j);
    if (j >= 2 || !axy.starts_at_zero()) {
        const FittedFactor f = fitted_pair(problem.drift(1, tau, pt, alpha),
                                           problem.a_bar(1, tau, pt, alpha), axy.node(j - 1), yj);
        out.down[1] = -axy.mid_below(j) * f.down / hy;
        out.diag += axy.mid_below(j) * f.up / hy;
    } else {
        const double ah = problem.a_bar(1, tau, pt, alpha);
        const double bh = problem.drift(1, tau, pt, alpha);
        const double y1 = axy.node(1);
        const double y2 = axy.node(2);
        out.down[1] = -y1 * (ah - bh) / (2.0 * y2);
        out.diag += y1 * (ah + bh) / (2.0 * y2);
    }
    pt[1] = yj;

    // --- z-direction fluxes ---
    pt[2] = axz.mid_above(k);
    {
        const FittedFactor f = fitted_pair(problem.drift(2, tau, pt, alpha),
                                           problem.a_bar(2, tau, pt, alpha), zk, axz.node(k + 1));
        out.up[2] = -axz.mid_above(k) * f.up / hz;
        out.diag += axz.mid_above(k) * f.down / hz;
    }
    pt[2] = axz.mid_below(k);
    if (k >= 2 || !axz.starts_at_zero()) {
        const FittedFactor f = fitted_pair(problem.drift(2, tau, pt, alpha),
                                           problem.a_bar(2, tau, pt, alpha), axz.node(k - 1), zk);
        out.down[2] = -axz.mid_below(k) * f.down / hz;
        out.diag += axz.mid_below(k) * f.up / hz;
    } else {
        const double ah = problem.a_bar(2, tau, pt, alpha);
        const double bh = problem.drift(2, tau, pt, alpha);
        const double z1 = axz.node(1);
        const double z2 = axz.node(2);
        out.down[2] = -z1 * (ah - bh) / (2.0 * z2);
        out.diag += z1 * (ah + bh) / (2.0 * z2);
    }
    pt[2] = zk;

    // --- forward-difference cross terms, written out as in the 3d stencil ---
    if (problem.has_cross()) {
        const double d1 = problem.cross(0, 1, tau, pt, alpha);
        const double d2 = problem.cross(0, 2, tau, pt, alpha);
        const double d3 = problem.cross(1, 2, tau, pt, alpha);
        const double cx = (d2 * xi * yj + d1 * xi * zk) / hx;
        const double cy = (d1 * yj * zk + d3 * xi * yj) / hy;
        const double cz = (d2 * yj * zk + d3 * xi * zk) / hz;
        out.up[0] -= cx;
        out.up[1] -= cy;
        out.up[2] -= cz;
        out.diag += cx + cy + cz;
    }
    out.diag -= problem.zeroth(tau, pt, alpha);
    out.source = problem.source_at(tau, pt, alpha);
}

SpatialOperator assemble_3d(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                            std::span<const double> alpha) {
    return assemble(FittedFvm3d{}, problem, mesh, tau, alpha);
}

SpatialOperator assemble_nd(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                            std::span<const double> alpha) {
    return assemble(FittedFvmNd{}, problem, mesh, tau, alpha);
}

} // namespace hjbfit
