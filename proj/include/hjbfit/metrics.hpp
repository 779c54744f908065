#pragma once

#include "hjbfit/stepper.hpp"

#include <functional>
#include <string>

namespace hjbfit {

/// One benchmark row: scheme, resolution, and the space-time error.
struct ErrorRecord {
    std::string scheme;
    std::vector<int> mesh_intervals;
    int time_steps = 0;
    double theta = 1.0;
    double l2_error = 0.0;
    int max_policy_iterations = 0;
    double wall_ms = 0.0;
};

using ExactEvaluator = std::function<double(double tau, std::span<const double> point)>;

/// Discrete L2([0,T] x Omega) norm of the error: sum over time levels
/// n = 0..m-1 and interior nodes of dt * cell_volume * (v^n - exact(tau_n))^2,
/// square-rooted. The terminal level m is excluded, matching the benchmark
/// quadrature.
double l2_spacetime_error(const Trajectory& trajectory, const ExactEvaluator& exact,
                          const TensorMesh& mesh, double dt);

/// Least-squares slope of log(error) against log(dt) over records sharing a
/// spatial mesh; requires at least two distinct step counts.
double fit_temporal_order(std::span<const ErrorRecord> records);

} // namespace hjbfit
