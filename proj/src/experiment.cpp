#include "hjbfit/experiment.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hjbfit {

namespace {

using nlohmann::json;

MertonParams preset_params(const std::string& name) {
    if (name == "table1") return MertonParams::table1();
    if (name == "table2") return MertonParams::table2();
    throw ConfigError("unknown merton preset '" + name + "' (expected table1 or table2)");
}

void apply_merton_overrides(MertonParams& prm, const json& j) {
    if (j.contains("r1")) prm.r1 = j.at("r1").get<double>();
    if (j.contains("mu1")) prm.mu1 = j.at("mu1").get<double>();
    if (j.contains("mu2")) prm.mu2 = j.at("mu2").get<double>();
    if (j.contains("mu3")) prm.mu3 = j.at("mu3").get<double>();
    if (j.contains("sigma")) prm.sigma = j.at("sigma").get<double>();
    if (j.contains("p")) prm.p = j.at("p").get<double>();
    if (j.contains("horizon")) prm.horizon = j.at("horizon").get<double>();
    if (j.contains("x_max")) {
        auto v = j.at("x_max").get<std::vector<double>>();
        if (v.size() != 3) throw ConfigError("params.x_max must have three entries");
        std::copy(v.begin(), v.end(), prm.x_max.begin());
    }
}

AxisSpec parse_axis(const json& j) {
    AxisSpec spec;
    if (j.contains("nodes")) {
        spec.nodes = j.at("nodes").get<std::vector<double>>();
    } else {
        spec.lo = j.value("lo", 0.0);
        spec.hi = j.at("hi").get<double>();
        spec.n = j.at("n").get<int>();
    }
    return spec;
}

} // namespace

std::string format_number(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ControlProblem smoke_problem(const SmokeParams& prm) {
    ControlProblem pb;
    pb.dim = prm.dim;
    pb.horizon = prm.horizon;
    const double a0 = prm.diffusion;
    const double b0 = prm.drift;
    const double c0 = prm.zeroth;
    const double rate = prm.rate();
    pb.a_bar = [a0](int, double, std::span<const double>, double) { return a0; };
    pb.drift = [b0](int, double, std::span<const double>, double) { return b0; };
    pb.cross = nullptr;
    pb.zeroth = [c0](double, std::span<const double>, double) { return c0; };
    pb.terminal = [](std::span<const double>) { return 1.0; };
    pb.boundary = [rate](double tau, std::span<const double>) { return std::exp(rate * tau); };
    pb.boundary_policy = BoundaryPolicy(prm.dim, BoundaryPolicy::Mode::kCallback);
    return pb;
}

std::vector<std::string> RunConfig::schemes() const {
    if (scheme == "both") return {"fitted", "fdm"};
    return {scheme};
}

void RunConfig::check() const {
    if (problem != "merton3d" && problem != "smoke")
        throw ConfigError("unknown problem '" + problem + "' (expected merton3d or smoke)");
    if (scheme != "fitted" && scheme != "fdm" && scheme != "both")
        throw ConfigError("scheme must be fitted, fdm or both");
    if (time_steps.empty()) throw ConfigError("time_steps must contain at least one value");
    for (int m : time_steps)
        if (m < 1) throw ConfigError("time_steps entries must be >= 1");
    if (!(theta >= 0.5 && theta <= 1.0)) throw ConfigError("theta must lie in [1/2, 1]");
    if (control_samples < 1) throw ConfigError("control_samples must be >= 1");
    if (!(policy_tol > 0.0)) throw ConfigError("policy_tol must be positive");
    if (max_policy_iterations < 1) throw ConfigError("max_policy_iterations must be >= 1");
    if (!(linear_rtol > 0.0)) throw ConfigError("linear_rtol must be positive");
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        RunConfig cfg;
        cfg.problem = j.value("problem", cfg.problem);
        cfg.preset = j.value("preset", cfg.preset);
        if (cfg.problem == "merton3d") {
            cfg.merton = preset_params(cfg.preset);
            if (j.contains("params")) apply_merton_overrides(cfg.merton, j.at("params"));
            if (j.contains("psi_sign")) {
                const std::string s = j.at("psi_sign").get<std::string>();
                if (s == "derived")
                    cfg.merton.psi = PsiConvention::kDerived;
                else if (s == "as-printed")
                    cfg.merton.psi = PsiConvention::kAsPrinted;
                else
                    throw ConfigError("psi_sign must be 'derived' or 'as-printed'");
            }
        } else if (j.contains("params")) {
            const json& s = j.at("params");
            cfg.smoke.dim = s.value("dim", cfg.smoke.dim);
            cfg.smoke.diffusion = s.value("diffusion", cfg.smoke.diffusion);
            cfg.smoke.drift = s.value("drift", cfg.smoke.drift);
            cfg.smoke.zeroth = s.value("zeroth", cfg.smoke.zeroth);
            cfg.smoke.horizon = s.value("horizon", cfg.smoke.horizon);
            cfg.smoke.hi = s.value("hi", cfg.smoke.hi);
            cfg.smoke.intervals = s.value("intervals", cfg.smoke.intervals);
        }
        if (j.contains("mesh"))
            for (const auto& a : j.at("mesh")) cfg.mesh.push_back(parse_axis(a));
        if (j.contains("time_steps")) {
            cfg.time_steps.clear();
            if (j.at("time_steps").is_array())
                cfg.time_steps = j.at("time_steps").get<std::vector<int>>();
            else
                cfg.time_steps.push_back(j.at("time_steps").get<int>());
        }
        cfg.theta = j.value("theta", cfg.theta);
        cfg.scheme = j.value("scheme", cfg.scheme);
        cfg.control_samples = j.value("control_samples", cfg.control_samples);
        cfg.policy_tol = j.value("policy_tol", cfg.policy_tol);
        cfg.max_policy_iterations = j.value("max_policy_iterations", cfg.max_policy_iterations);
        cfg.linear_rtol = j.value("linear_rtol", cfg.linear_rtol);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.dump_operator = j.value("dump_operator", cfg.dump_operator);
        cfg.dump_policy = j.value("dump_policy", cfg.dump_policy);
        cfg.dump_trajectory = j.value("dump_trajectory", cfg.dump_trajectory);
        cfg.mmatrix_audit = j.value("mmatrix_audit", cfg.mmatrix_audit);
        cfg.wall_clock = j.value("wall_clock", cfg.wall_clock);
        cfg.check();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ExperimentSetup build_setup(const RunConfig& cfg) {
    cfg.check();
    std::vector<Axis> axes;
    if (cfg.problem == "merton3d") {
        const MertonParams prm = cfg.merton;
        if (cfg.mesh.empty()) {
            for (int d = 0; d < 3; ++d) axes.push_back(Axis::uniform(0.0, prm.x_max[d], prm.intervals[d]));
        } else {
            if (cfg.mesh.size() != 3) throw ConfigError("merton3d needs a three-axis mesh");
            for (const auto& s : cfg.mesh) axes.push_back(s.build());
        }
        const AnsatzSolution ansatz = compute_rho(prm);
        return ExperimentSetup{
            merton_problem(prm), TensorMesh(std::move(axes)),
            ControlSet::uniform(0.0, 1.0, cfg.control_samples),
            [ansatz](double tau, std::span<const double> x) { return ansatz.value(tau, x); }};
    }
    const SmokeParams prm = cfg.smoke;
    if (cfg.mesh.empty()) {
        for (int d = 0; d < prm.dim; ++d) axes.push_back(Axis::uniform(0.0, prm.hi, prm.intervals));
    } else {
        for (const auto& s : cfg.mesh) axes.push_back(s.build());
    }
    const double rate = prm.rate();
    return ExperimentSetup{smoke_problem(prm), TensorMesh(std::move(axes)),
                           ControlSet::uniform(0.0, 1.0, cfg.control_samples),
                           [rate](double tau, std::span<const double>) { return std::exp(rate * tau); }};
}

namespace {

const SpatialAssembler& assembler_for(const std::string& scheme) {
    static const FittedFvmNd fitted;
    static const UpwindFdm fdm;
    return scheme == "fdm" ? static_cast<const SpatialAssembler&>(fdm) : fitted;
}

void write_errors_csv(const std::filesystem::path& path, std::span<const ErrorRecord> records) {
    std::ofstream os(path);
    os << "scheme,N1,N2,N3,m,theta,l2_error,max_policy_iters,wall_ms\n";
    for (const auto& r : records) {
        os << r.scheme;
        for (int d = 0; d < 3; ++d)
            os << "," << (d < static_cast<int>(r.mesh_intervals.size())
                              ? std::to_string(r.mesh_intervals[static_cast<size_t>(d)])
                              : std::string());
        os << "," << r.time_steps << "," << format_number(r.theta) << "," << format_number(r.l2_error)
           << "," << r.max_policy_iterations << "," << format_number(r.wall_ms) << "\n";
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, double dt) {
    std::ofstream os(path);
    os << "level,tau,flat_index,v,alpha\n";
    for (int n = 0; n < traj.levels(); ++n) {
        const Eigen::VectorXd& v = traj.level(n);
        const PolicyState* state = n > 0 ? &traj.steps[static_cast<size_t>(n) - 1] : nullptr;
        for (long i = 0; i < v.size(); ++i) {
            os << n << "," << format_number(n * dt) << "," << (i + 1) << "," << format_number(v[i])
               << ",";
            if (state) os << format_number(state->control[static_cast<size_t>(i)]);
            os << "\n";
        }
    }
}

void write_policy_csv(const std::filesystem::path& path, const TensorMesh& mesh,
                      std::span<const double> control) {
    std::ofstream os(path);
    os << "flat_index";
    if (mesh.dim() == 3) {
        os << ",x,y,z";
    } else {
        for (int d = 0; d < mesh.dim(); ++d) os << ",x" << (d + 1);
    }
    os << ",alpha\n";
    std::vector<int> idx(static_cast<size_t>(mesh.dim()), 1);
    std::vector<double> pt(static_cast<size_t>(mesh.dim()));
    for (long I = 0; I < mesh.interior_count(); ++I) {
        mesh.point(idx, pt);
        os << (I + 1);
        for (double c : pt) os << "," << format_number(c);
        os << "," << format_number(control[static_cast<size_t>(I)]) << "\n";
        for (int d = 0; d < mesh.dim(); ++d) {
            if (++idx[static_cast<size_t>(d)] <= mesh.axis(d).intervals() - 1) break;
            idx[static_cast<size_t>(d)] = 1;
        }
    }
}

} // namespace

RunResult run_experiment(const RunConfig& cfg) {
    const ExperimentSetup setup = build_setup(cfg);
    const std::filesystem::path outdir(cfg.output_dir);
    std::filesystem::create_directories(outdir);

    RunResult result;
    std::ostringstream audit_log;
    std::ostringstream summary;

    for (const std::string& scheme : cfg.schemes()) {
        const SpatialAssembler& assembler = assembler_for(scheme);
        for (size_t mi = 0; mi < cfg.time_steps.size(); ++mi) {
            const int m = cfg.time_steps[mi];
            StepperConfig sc;
            sc.theta = cfg.theta;
            sc.steps = m;
            sc.policy_tol = cfg.policy_tol;
            sc.max_policy_iterations = cfg.max_policy_iterations;
            sc.linear_rtol = cfg.linear_rtol;
            sc.audit_mmatrix = cfg.mmatrix_audit;

            const auto t0 = std::chrono::steady_clock::now();
            const Trajectory traj = solve(assembler, setup.problem, setup.mesh, setup.controls, sc);
            const auto t1 = std::chrono::steady_clock::now();

            ErrorRecord rec;
            rec.scheme = scheme;
            for (int d = 0; d < setup.mesh.dim(); ++d)
                rec.mesh_intervals.push_back(setup.mesh.axis(d).intervals());
            rec.time_steps = m;
            rec.theta = cfg.theta;
            rec.l2_error =
                l2_spacetime_error(traj, setup.exact, setup.mesh, setup.problem.horizon / m);
            rec.max_policy_iterations = traj.max_policy_iterations();
            rec.wall_ms = cfg.wall_clock
                              ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                              : 0.0;
            summary << scheme << " m=" << m << " l2_error=" << format_number(rec.l2_error)
                    << " max_iters=" << rec.max_policy_iterations << "\n";
            result.errors.push_back(std::move(rec));

            if (cfg.mmatrix_audit) {
                int bad_levels = 0;
                double worst_slack = std::numeric_limits<double>::infinity();
                for (const StepAudit& a : traj.audits) {
                    if (!a.spatial.is_m_matrix || !a.step_matrix.is_m_matrix) ++bad_levels;
                    worst_slack = std::min(worst_slack, a.spatial.worst_dominance_slack);
                }
                if (bad_levels > 0) result.mmatrix_ok = false;
                audit_log << scheme << " m=" << m << ": "
                          << (bad_levels == 0 ? "all levels pass"
                                              : std::to_string(bad_levels) + " level(s) fail")
                          << " (worst spatial dominance slack " << format_number(worst_slack)
                          << ")\n";
            }

            // dump artifacts once per scheme, at the last configured step count
            if (mi + 1 == cfg.time_steps.size()) {
                const PolicyState& last = traj.steps.back();
                if (cfg.dump_operator) {
                    const SpatialOperator op = assemble(assembler, setup.problem, setup.mesh,
                                                        setup.problem.horizon, last.control);
                    std::ofstream os(outdir / ("operator_" + scheme + ".txt"));
                    write_triplets(os, op);
                }
                if (cfg.dump_policy)
                    write_policy_csv(outdir / ("policy_" + scheme + ".csv"), setup.mesh, last.control);
                if (cfg.dump_trajectory)
                    write_trajectory_csv(outdir / ("trajectory_" + scheme + ".csv"), traj,
                                         setup.problem.horizon / m);
            }
        }
    }

    write_errors_csv(outdir / "errors.csv", result.errors);
    if (cfg.mmatrix_audit) {
        std::ofstream os(outdir / "mmatrix_audit.txt");
        os << audit_log.str();
        summary << "mmatrix audit: " << (result.mmatrix_ok ? "all levels pass" : "FAILED") << "\n";
    }
    result.summary = summary.str();
    return result;
}

RunResult run_convergence(const RunConfig& cfg) {
    std::set<int> distinct(cfg.time_steps.begin(), cfg.time_steps.end());
    if (distinct.size() < 2)
        throw ConfigError("convergence needs at least two distinct time_steps values");
    RunResult result = run_experiment(cfg);

    std::ostringstream order_text;
    for (const std::string& scheme : cfg.schemes()) {
        std::vector<ErrorRecord> rows;
        for (const auto& r : result.errors)
            if (r.scheme == scheme) rows.push_back(r);
        const double slope = fit_temporal_order(rows);
        result.orders.emplace_back(scheme, slope);
        order_text << scheme << " slope " << format_number(slope) << "\n";
    }
    std::ofstream os(std::filesystem::path(cfg.output_dir) / "order.txt");
    os << order_text.str();
    result.summary += order_text.str();
    return result;
}

RunResult run_validate(const RunConfig& cfg) {
    const ExperimentSetup setup = build_setup(cfg);
    RunResult result;
    const std::vector<Violation> violations = validate(setup.problem, setup.mesh, setup.controls);
    std::ostringstream summary;
    summary << violations.size() << " violation bucket(s)\n";
    for (const auto& v : violations) result.violations.push_back(v.describe());
    result.summary = summary.str();
    return result;
}

} // namespace hjbfit
