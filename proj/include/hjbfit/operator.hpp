#pragma once

#include "hjbfit/mesh.hpp"
#include "hjbfit/problem.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace hjbfit {

/// One assembled row of E in stencil form. Entries are indexed per axis; a
/// neighbor whose index falls on the box boundary contributes to F instead of
/// the matrix. F_I = sum over boundary neighbors of coeff * v_b(tau) - source.
struct StencilRow {
    double diag = 0.0;
    std::vector<double> down; // coefficient on the (idx_d - 1) neighbor, per axis
    std::vector<double> up;   // coefficient on the (idx_d + 1) neighbor, per axis
    double source = 0.0;      // f contribution
    std::vector<double> point; // assembler coordinate scratch; node coords after row()

    void reset(int dim) {
        diag = 0.0;
        source = 0.0;
        down.assign(static_cast<size_t>(dim), 0.0);
        up.assign(static_cast<size_t>(dim), 0.0);
        point.resize(static_cast<size_t>(dim));
    }
};

/// Row-wise spatial discretization of the divergence-form operator in the
/// E-convention: dv/dtau + inf_alpha [E v + F] = 0 with A = -E, G = -F.
/// Implementations must be pure: row() may be called concurrently.
class SpatialAssembler {
public:
    virtual ~SpatialAssembler() = default;
    virtual std::string_view name() const = 0;
    virtual void row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                     std::span<const int> idx, double alpha, StencilRow& out) const = 0;
};

/// E(tau, alpha) with its boundary/source vector F and the control assignment
/// that produced it. Rows touch only the node and its 2n axis neighbors.
struct SpatialOperator {
    Eigen::SparseMatrix<double, Eigen::RowMajor> E;
    Eigen::VectorXd F;
    double tau = 0.0;
    std::vector<double> control;
};

/// Assembles E and F over all interior nodes; `alpha` assigns one control
/// value per interior node in flat order (size interior_count()).
SpatialOperator assemble(const SpatialAssembler& assembler, const ControlProblem& problem,
                         const TensorMesh& mesh, double tau, std::span<const double> alpha);

/// Sign-pattern and weak row diagonal dominance check. `offdiag_row/col`,
/// `dominance_row` and `diagonal_row` hold 0-based offending flat indices, or
/// -1 when the corresponding check passed everywhere.
struct MMatrixReport {
    bool is_m_matrix = false;
    double worst_offdiag_violation = 0.0; // largest positive off-diagonal entry
    double worst_dominance_slack = 0.0;   // min over rows of |diag| - sum |offdiag|
    double worst_diagonal = 0.0;          // smallest diagonal entry
    long offdiag_row = -1;
    long offdiag_col = -1;
    long dominance_row = -1;
    long diagonal_row = -1;
};

/// rel_tol absorbs roundoff: a row whose dominance slack or off-diagonal
/// excess is below rel_tol times the row magnitude still passes.
MMatrixReport m_matrix_check(const Eigen::SparseMatrix<double, Eigen::RowMajor>& E,
                             double rel_tol = 1e-12);
MMatrixReport m_matrix_check(const SpatialOperator& op, double rel_tol = 1e-12);

/// Coordinate-triplet text dump: header "# rows cols nnz", then one
/// "row col value" line per entry (1-based), then "F <row> <value>" lines.
void write_triplets(std::ostream& os, const SpatialOperator& op);

namespace detail {

/// Forward-difference cross terms plus the zeroth and source contributions,
/// shared by the generic fitted and the FDM assemblies. Expects out.point to
/// hold the node coordinates.
void add_cross_zeroth_source(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                             std::span<const int> idx, double alpha, StencilRow& out);

} // namespace detail

} // namespace hjbfit
