#pragma once

#include "hjbfit/fdm.hpp"
#include "hjbfit/fitted_fvm.hpp"
#include "hjbfit/merton.hpp"
#include "hjbfit/metrics.hpp"

#include <optional>
#include <string>

namespace hjbfit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Axis given either as {lo, hi, n} or as an explicit node list.
struct AxisSpec {
    double lo = 0.0;
    double hi = 1.0;
    int n = 0;
    std::vector<double> nodes;

    Axis build() const { return nodes.empty() ? Axis::uniform(lo, hi, n) : Axis(nodes); }
};

/// Constant-coefficient smoke-test problem on [0, hi]^dim with exact solution
/// v(tau) = exp((zeroth + dim * drift) tau); useful for stepper checks.
struct SmokeParams {
    int dim = 3;
    double diffusion = 1.0;
    double drift = 0.0;
    double zeroth = -1.0;
    double horizon = 1.0;
    double hi = 1.0;
    int intervals = 6;

    double rate() const { return zeroth + dim * drift; }
};

ControlProblem smoke_problem(const SmokeParams& params);

struct RunConfig {
    std::string problem = "merton3d"; // or "smoke"
    std::string preset = "table1";    // merton parameter set name
    MertonParams merton = MertonParams::table1();
    SmokeParams smoke;
    std::vector<AxisSpec> mesh;    // empty: preset default
    std::vector<int> time_steps{200};
    double theta = 1.0;
    std::string scheme = "fitted"; // fitted | fdm | both
    int control_samples = 101;
    double policy_tol = 1e-8;
    int max_policy_iterations = 50;
    double linear_rtol = 1e-10;
    std::string output_dir = "out";
    bool dump_operator = false;
    bool dump_policy = false;
    bool dump_trajectory = false; // per-level v and alpha checkpoints
    bool mmatrix_audit = false;
    bool wall_clock = true; // false writes wall_ms = 0 for byte-stable output

    std::vector<std::string> schemes() const;
    void check() const;
};

/// Parses the JSON text documented in the README; throws ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

struct RunResult {
    std::vector<ErrorRecord> errors;
    std::vector<std::pair<std::string, double>> orders; // scheme -> fitted slope
    std::vector<std::string> violations;
    bool mmatrix_ok = true;
    std::string summary;
};

/// Everything a run needs, materialized from a config.
struct ExperimentSetup {
    ControlProblem problem;
    TensorMesh mesh;
    ControlSet controls;
    ExactEvaluator exact;
};

ExperimentSetup build_setup(const RunConfig& config);

/// Executes the configured solves and writes errors.csv plus the optional
/// operator/policy/audit artifacts into output_dir.
RunResult run_experiment(const RunConfig& config);

/// run_experiment plus the temporal-order fit (order.txt); requires at least
/// two distinct step counts.
RunResult run_convergence(const RunConfig& config);

/// Coefficient-hypothesis probes only; writes no artifacts.
RunResult run_validate(const RunConfig& config);

/// Locale-independent shortest round-trip formatting used in all CSV output.
std::string format_number(double v);

} // namespace hjbfit
