#include "hjbfit/fdm.hpp"

namespace hjbfit {

void UpwindFdm::row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                    std::span<const int> idx, double alpha, StencilRow& out) const {
    const int n = mesh.dim();
    out.reset(n);
    mesh.point(idx, out.point);
    std::span<const double> pt(out.point.data(), static_cast<size_t>(n));

    for (int d = 0; d < n; ++d) {
        const Axis& ax = mesh.axis(d);
        const int q = idx[static_cast<size_t>(d)];
        const double x = pt[static_cast<size_t>(d)];
        const double dm = x - ax.node(q - 1);
        const double dp = ax.node(q + 1) - x;

        // a_dd(node) * central second difference on the nonuniform grid
        const double w = problem.a_bar(d, tau, pt, alpha) * x * x;
        out.up[static_cast<size_t>(d)] -= 2.0 * w / (dp * (dm + dp));
        out.down[static_cast<size_t>(d)] -= 2.0 * w / (dm * (dm + dp));
        out.diag += 2.0 * w / (dm * dp);

        // upwind first difference on the divergence-form drift x_d * b_d
        const double v = x * problem.drift(d, tau, pt, alpha);
        if (v >= 0.0) {
            out.up[static_cast<size_t>(d)] -= v / dp;
            out.diag += v / dp;
        } else {
            out.down[static_cast<size_t>(d)] += v / dm;
            out.diag -= v / dm;
        }
    }

    detail::add_cross_zeroth_source(problem, mesh, tau, idx, alpha, out);
}

SpatialOperator assemble_fdm(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                             std::span<const double> alpha) {
    return assemble(UpwindFdm{}, problem, mesh, tau, alpha);
}

} // namespace hjbfit
