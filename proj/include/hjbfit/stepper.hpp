#pragma once

#include "hjbfit/operator.hpp"

#include <optional>
#include <stdexcept>

namespace hjbfit {

struct StepperConfig {
    double theta = 1.0; // in [1/2, 1]: 1 implicit Euler, 1/2 Crank-Nicolson
    int steps = 1;      // uniform steps; dt = horizon / steps
    double policy_tol = 1e-8;
    int max_policy_iterations = 50;
    double linear_rtol = 1e-10;
    bool audit_mmatrix = false;

    void check() const {
        if (!(theta >= 0.5 && theta <= 1.0))
            throw std::invalid_argument("StepperConfig: theta must lie in [1/2, 1]");
        if (steps < 1) throw std::invalid_argument("StepperConfig: need at least one step");
        if (!(policy_tol > 0.0)) throw std::invalid_argument("StepperConfig: policy_tol must be positive");
        if (max_policy_iterations < 1)
            throw std::invalid_argument("StepperConfig: need at least one policy iteration");
    }
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of one time level: value iterate, per-node control, and the policy
/// iteration diagnostics (iterations_used counts linear solves).
struct PolicyState {
    Eigen::VectorXd v;
    std::vector<double> control;
    int iterations_used = 0;
    double residual = 0.0;
    bool converged = true;
    std::vector<double> residual_history;
};

/// Per-level audit produced when StepperConfig::audit_mmatrix is set.
struct StepAudit {
    int level = 0; // the tau_{n+1} level index
    MMatrixReport spatial;     // E(tau_{n+1}, alpha)
    MMatrixReport step_matrix; // I + dt theta E(tau_{n+1}, alpha)
};

struct Trajectory {
    Eigen::VectorXd initial;
    std::vector<PolicyState> steps;
    std::vector<StepAudit> audits;

    int levels() const { return static_cast<int>(steps.size()) + 1; }
    const Eigen::VectorXd& level(int n) const {
        return n == 0 ? initial : steps[static_cast<size_t>(n) - 1].v;
    }
    int max_policy_iterations() const {
        int m = 0;
        for (const auto& s : steps) m = std::max(m, s.iterations_used);
        return m;
    }
};

/// Picks the maximizing control with deterministic tie-breaking: highest
/// value, then smallest sample. Invariant under permutations of the input.
int argmax_control(std::span<const double> values, std::span<const double> samples);

/// Row `idx` of the theta-weighted discrete Hamiltonian
///   theta dt [A(tau_next) v_hat + G(tau_next)] + (1-theta) dt [A(tau_now) v_now + G(tau_now)]
/// evaluated at a single control candidate. Row idx of A depends only on the
/// control at idx, so the per-node argmax decouples.
double hamiltonian_row(const SpatialAssembler& assembler, const ControlProblem& problem,
                       const TensorMesh& mesh, double tau_next, double tau_now,
                       const Eigen::VectorXd& v_hat, const Eigen::VectorXd& v_now,
                       std::span<const int> idx, double alpha, double theta, double dt,
                       StencilRow& scratch);

/// One theta-method step with per-node policy iteration: alternate the
/// exhaustive per-node argmax with the linear solve
///   [I - theta dt A(alpha)] v = [I + (1-theta) dt A(tau_now, alpha)] v_now + ...
/// until the sup-norm change drops below policy_tol or the policy repeats.
PolicyState policy_step(const SpatialAssembler& assembler, const ControlProblem& problem,
                        const TensorMesh& mesh, const ControlSet& controls,
                        const Eigen::VectorXd& v_now, double tau_now, double tau_next,
                        const StepperConfig& config);

/// Marches tau from 0 to the horizon starting from the terminal data g
/// sampled on the interior nodes.
Trajectory solve(const SpatialAssembler& assembler, const ControlProblem& problem,
                 const TensorMesh& mesh, const ControlSet& controls, const StepperConfig& config);

} // namespace hjbfit
