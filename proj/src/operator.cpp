#include "hjbfit/operator.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hjbfit {

namespace {

void format_double(std::ostream& os, double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    os.write(buf, res.ptr - buf);
}

} // namespace

SpatialOperator assemble(const SpatialAssembler& assembler, const ControlProblem& problem,
                         const TensorMesh& mesh, double tau, std::span<const double> alpha) {
    const int n = mesh.dim();
    if (problem.dim != n)
        throw std::invalid_argument("assemble: problem/mesh dimension mismatch");
    if (static_cast<int>(problem.boundary_policy.faces.size()) != n)
        throw std::invalid_argument("assemble: boundary policy does not cover every axis");
    const long N = mesh.interior_count();
    if (static_cast<long>(alpha.size()) != N)
        throw std::invalid_argument("assemble: control assignment size mismatch");

    SpatialOperator op;
    op.tau = tau;
    op.control.assign(alpha.begin(), alpha.end());
    op.F = Eigen::VectorXd::Zero(N);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(N) * static_cast<size_t>(2 * n + 1));

    std::vector<int> idx(static_cast<size_t>(n), 1);
    std::vector<double> pt(static_cast<size_t>(n));
    std::vector<long> strides(static_cast<size_t>(n));
    long stride = 1;
    for (int d = 0; d < n; ++d) {
        strides[static_cast<size_t>(d)] = stride;
        stride *= mesh.axis(d).interior_count();
    }

    StencilRow row;
    row.reset(n);
    for (long I = 0; I < N; ++I) {
        assembler.row(problem, mesh, tau, idx, alpha[static_cast<size_t>(I)], row);

        trip.emplace_back(static_cast<int>(I), static_cast<int>(I), row.diag);
        double f = -row.source;
        for (int d = 0; d < n; ++d) {
            const Axis& ax = mesh.axis(d);
            const int k = idx[static_cast<size_t>(d)];
            if (row.down[static_cast<size_t>(d)] != 0.0 || k == 1) {
                if (k > 1) {
                    trip.emplace_back(static_cast<int>(I), static_cast<int>(I - strides[static_cast<size_t>(d)]),
                                      row.down[static_cast<size_t>(d)]);
                } else if (row.down[static_cast<size_t>(d)] != 0.0) {
                    mesh.point(idx, pt);
                    pt[static_cast<size_t>(d)] = ax.node(0);
                    f += row.down[static_cast<size_t>(d)] * problem.boundary_value(d, 0, tau, pt);
                }
            }
            if (row.up[static_cast<size_t>(d)] != 0.0 || k == ax.intervals() - 1) {
                if (k < ax.intervals() - 1) {
                    trip.emplace_back(static_cast<int>(I), static_cast<int>(I + strides[static_cast<size_t>(d)]),
                                      row.up[static_cast<size_t>(d)]);
                } else if (row.up[static_cast<size_t>(d)] != 0.0) {
                    mesh.point(idx, pt);
                    pt[static_cast<size_t>(d)] = ax.hi();
                    f += row.up[static_cast<size_t>(d)] * problem.boundary_value(d, 1, tau, pt);
                }
            }
        }
        op.F[I] = f;

        for (int d = 0; d < n; ++d) { // advance multi-index, axis 0 fastest
            if (++idx[static_cast<size_t>(d)] <= mesh.axis(d).intervals() - 1) break;
            idx[static_cast<size_t>(d)] = 1;
        }
    }

    op.E.resize(static_cast<int>(N), static_cast<int>(N));
    op.E.setFromTriplets(trip.begin(), trip.end());
    op.E.makeCompressed();
    return op;
}

MMatrixReport m_matrix_check(const Eigen::SparseMatrix<double, Eigen::RowMajor>& E, double rel_tol) {
    MMatrixReport rep;
    rep.is_m_matrix = true;
    rep.worst_dominance_slack = std::numeric_limits<double>::infinity();
    rep.worst_diagonal = std::numeric_limits<double>::infinity();

    for (int i = 0; i < E.outerSize(); ++i) {
        double diag = 0.0;
        double offsum = 0.0;
        double offmax = 0.0;
        long offcol = -1;
        double rowmax = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(E, i); it; ++it) {
            const double v = it.value();
            rowmax = std::max(rowmax, std::abs(v));
            if (it.col() == i) {
                diag = v;
            } else {
                offsum += std::abs(v);
                if (v > offmax) {
                    offmax = v;
                    offcol = it.col();
                }
            }
        }
        const double tol = rel_tol * std::max(1.0, rowmax);
        if (offmax > tol && offmax > rep.worst_offdiag_violation) {
            rep.worst_offdiag_violation = offmax;
            rep.offdiag_row = i;
            rep.offdiag_col = offcol;
            rep.is_m_matrix = false;
        }
        if (diag < rep.worst_diagonal) {
            rep.worst_diagonal = diag;
            rep.diagonal_row = i;
        }
        if (diag <= tol) rep.is_m_matrix = false;
        const double slack = std::abs(diag) - offsum;
        if (slack < rep.worst_dominance_slack) {
            rep.worst_dominance_slack = slack;
            rep.dominance_row = i;
        }
        if (slack < -tol) rep.is_m_matrix = false;
    }
    if (E.rows() == 0) {
        rep.worst_dominance_slack = 0.0;
        rep.worst_diagonal = 0.0;
    }
    return rep;
}

MMatrixReport m_matrix_check(const SpatialOperator& op, double rel_tol) {
    return m_matrix_check(op.E, rel_tol);
}

void write_triplets(std::ostream& os, const SpatialOperator& op) {
    os << "# " << op.E.rows() << " " << op.E.cols() << " " << op.E.nonZeros() << "\n";
    for (int i = 0; i < op.E.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.E, i); it; ++it) {
            os << (i + 1) << " " << (it.col() + 1) << " ";
            format_double(os, it.value());
            os << "\n";
        }
    for (long i = 0; i < op.F.size(); ++i) {
        os << "F " << (i + 1) << " ";
        format_double(os, op.F[i]);
        os << "\n";
    }
}

} // namespace hjbfit
