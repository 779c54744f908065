#include "hjbfit/stepper.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace hjbfit {

namespace {

struct Layout {
    std::vector<long> strides;
    explicit Layout(const TensorMesh& mesh) : strides(static_cast<size_t>(mesh.dim())) {
        long s = 1;
        for (int d = 0; d < mesh.dim(); ++d) {
            strides[static_cast<size_t>(d)] = s;
            s *= mesh.axis(d).interior_count();
        }
    }
};

/// (E v + F)_I from a stencil row; boundary neighbors are resolved through
/// the problem's Dirichlet data at the given tau.
double apply_row(const StencilRow& row, const ControlProblem& problem, const TensorMesh& mesh,
                 double tau, std::span<const int> idx, long flat, const Layout& layout,
                 const Eigen::VectorXd& v, std::vector<double>& pt) {
    const int n = mesh.dim();
    double acc = row.diag * v[flat] - row.source;
    for (int d = 0; d < n; ++d) {
        const Axis& ax = mesh.axis(d);
        const int k = idx[static_cast<size_t>(d)];
        const double dn = row.down[static_cast<size_t>(d)];
        if (dn != 0.0) {
            if (k > 1) {
                acc += dn * v[flat - layout.strides[static_cast<size_t>(d)]];
            } else {
                pt.assign(row.point.begin(), row.point.end());
                pt[static_cast<size_t>(d)] = ax.node(0);
                acc += dn * problem.boundary_value(d, 0, tau, pt);
            }
        }
        const double up = row.up[static_cast<size_t>(d)];
        if (up != 0.0) {
            if (k < ax.intervals() - 1) {
                acc += up * v[flat + layout.strides[static_cast<size_t>(d)]];
            } else {
                pt.assign(row.point.begin(), row.point.end());
                pt[static_cast<size_t>(d)] = ax.hi();
                acc += up * problem.boundary_value(d, 1, tau, pt);
            }
        }
    }
    return acc;
}

void advance_index(std::span<int> idx, const TensorMesh& mesh) {
    for (int d = 0; d < mesh.dim(); ++d) {
        if (++idx[static_cast<size_t>(d)] <= mesh.axis(d).intervals() - 1) return;
        idx[static_cast<size_t>(d)] = 1;
    }
}

Eigen::VectorXd solve_linear(const SpatialOperator& op_next,
                             const SpatialOperator* op_now, // null when theta == 1
                             const Eigen::VectorXd& v_now, double theta, double dt,
                             double linear_rtol) {
    const long N = v_now.size();
    Eigen::SparseMatrix<double> lhs = (theta * dt) * op_next.E;
    for (long i = 0; i < N; ++i) lhs.coeffRef(i, i) += 1.0;
    lhs.makeCompressed();

    Eigen::VectorXd rhs = v_now - (theta * dt) * op_next.F;
    if (op_now) {
        rhs -= ((1.0 - theta) * dt) * (op_now->E * v_now);
        rhs -= ((1.0 - theta) * dt) * op_now->F;
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success)
        throw SolverError("policy_step: sparse factorization failed (singular step matrix)");
    Eigen::VectorXd v = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw SolverError("policy_step: sparse solve failed");
    const double resid = (lhs * v - rhs).norm();
    const double scale = std::max(rhs.norm(), 1e-300);
    if (!(resid / scale <= linear_rtol))
        throw SolverError("policy_step: linear solve residual above tolerance");
    return v;
}

} // namespace

int argmax_control(std::span<const double> values, std::span<const double> samples) {
    int best = 0;
    for (int s = 1; s < static_cast<int>(values.size()); ++s) {
        const double v = values[static_cast<size_t>(s)];
        const double bv = values[static_cast<size_t>(best)];
        if (v > bv || (v == bv && samples[static_cast<size_t>(s)] < samples[static_cast<size_t>(best)]))
            best = s;
    }
    return best;
}

double hamiltonian_row(const SpatialAssembler& assembler, const ControlProblem& problem,
                       const TensorMesh& mesh, double tau_next, double tau_now,
                       const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_now,
                       std::span<const int> idx, double alpha, double theta, double dt,
                       StencilRow& scratch) {
    const Layout layout(mesh);
    const long flat = mesh.linearize(idx) - 1;
    std::vector<double> pt(static_cast<size_t>(mesh.dim()));

    assembler.row(problem, mesh, tau_next, idx, alpha, scratch);
    double val = -theta * dt * apply_row(scratch, problem, mesh, tau_next, idx, flat, layout, v_hat, pt);
    if (theta < 1.0) {
        assembler.row(problem, mesh, tau_now, idx, alpha, scratch);
        val -= (1.0 - theta) * dt *
               apply_row(scratch, problem, mesh, tau_now, idx, flat, layout, v_now, pt);
    }
    return val;
}

PolicyState policy_step(const SpatialAssembler& assembler, const ControlProblem& problem,
                        const TensorMesh& mesh, const ControlSet& controls,
                        const Eigen::VectorXd& v_now, double tau_now, double tau_next,
                        const StepperConfig& config) {
    config.check();
    controls.check();
    const long N = mesh.interior_count();
    if (v_now.size() != N)
        throw std::invalid_argument("policy_step: value vector size mismatch");
    const int n = mesh.dim();
    const double dt = tau_next - tau_now;
    const double theta = config.theta;
    const Layout layout(mesh);
    const int S = static_cast<int>(controls.samples.size());

    PolicyState state;
    state.v = v_now;
    state.control.assign(static_cast<size_t>(N), controls.samples.front());

    std::vector<double> prev_control;
    std::vector<double> values(static_cast<size_t>(S));
    std::vector<int> idx(static_cast<size_t>(n));
    std::vector<double> pt(static_cast<size_t>(n));
    StencilRow row;
    row.reset(n);

    for (int iter = 0; iter < config.max_policy_iterations; ++iter) {
        // (a) per-node exhaustive argmax; row I depends only on alpha_I
        std::fill(idx.begin(), idx.end(), 1);
        for (long I = 0; I < N; ++I) {
            for (int s = 0; s < S; ++s) {
                const double a = controls.samples[static_cast<size_t>(s)];
                assembler.row(problem, mesh, tau_next, idx, a, row);
                double val = -theta * dt *
                             apply_row(row, problem, mesh, tau_next, idx, I, layout, state.v, pt);
                if (theta < 1.0) {
                    assembler.row(problem, mesh, tau_now, idx, a, row);
                    val -= (1.0 - theta) * dt *
                           apply_row(row, problem, mesh, tau_now, idx, I, layout, v_now, pt);
                }
                values[static_cast<size_t>(s)] = val;
            }
            state.control[static_cast<size_t>(I)] =
                controls.samples[static_cast<size_t>(argmax_control(values, controls.samples))];
            advance_index(idx, mesh);
        }

        // a repeated policy reproduces the previous iterate exactly
        if (!prev_control.empty() && state.control == prev_control) {
            state.residual = 0.0;
            state.converged = true;
            return state;
        }

        // (b) linear solve at the frozen policy
        const SpatialOperator op_next = assemble(assembler, problem, mesh, tau_next, state.control);
        std::optional<SpatialOperator> op_now;
        if (theta < 1.0) op_now = assemble(assembler, problem, mesh, tau_now, state.control);
        Eigen::VectorXd v_new = solve_linear(op_next, op_now ? &*op_now : nullptr, v_now, theta, dt,
                                             config.linear_rtol);

        ++state.iterations_used;
        state.residual = (v_new - state.v).lpNorm<Eigen::Infinity>();
        state.residual_history.push_back(state.residual);
        state.v = std::move(v_new);
        prev_control = state.control;
        if (state.residual <= config.policy_tol) {
            state.converged = true;
            return state;
        }
    }
    state.converged = false; // warning: carries the last residual
    return state;
}

Trajectory solve(const SpatialAssembler& assembler, const ControlProblem& problem,
                 const TensorMesh& mesh, const ControlSet& controls, const StepperConfig& config) {
    config.check();
    const long N = mesh.interior_count();
    const double dt = problem.horizon / config.steps;

    Trajectory traj;
    traj.initial.resize(N);
    std::vector<int> idx(static_cast<size_t>(mesh.dim()), 1);
    std::vector<double> pt(static_cast<size_t>(mesh.dim()));
    for (long I = 0; I < N; ++I) {
        mesh.point(idx, pt);
        traj.initial[I] = problem.terminal(pt);
        for (int d = 0; d < mesh.dim(); ++d) {
            if (++idx[static_cast<size_t>(d)] <= mesh.axis(d).intervals() - 1) break;
            idx[static_cast<size_t>(d)] = 1;
        }
    }

    traj.steps.reserve(static_cast<size_t>(config.steps));
    const Eigen::VectorXd* v = &traj.initial;
    for (int nstep = 0; nstep < config.steps; ++nstep) {
        const double tau_now = nstep * dt;
        const double tau_next = (nstep + 1) * dt;
        traj.steps.push_back(policy_step(assembler, problem, mesh, controls, *v, tau_now, tau_next, config));
        v = &traj.steps.back().v;

        if (config.audit_mmatrix) {
            const SpatialOperator op =
                assemble(assembler, problem, mesh, tau_next, traj.steps.back().control);
            StepAudit audit;
            audit.level = nstep + 1;
            audit.spatial = m_matrix_check(op);
            Eigen::SparseMatrix<double, Eigen::RowMajor> step = (config.theta * dt) * op.E;
            for (long i = 0; i < N; ++i) step.coeffRef(i, i) += 1.0;
            audit.step_matrix = m_matrix_check(step);
            traj.audits.push_back(std::move(audit));
        }
    }
    return traj;
}

} // namespace hjbfit
