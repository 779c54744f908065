// Experiment runner over the hjbfit C API: run / convergence / validate
// subcommands with flags mirroring the JSON config schema.

#include <hjbfit.h>

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config_path;
    std::string problem;
    std::string preset;
    std::string scheme;
    std::string output_dir;
    std::string psi_sign;
    std::vector<int> steps;
    double theta = -1.0;
    int control_samples = -1;
    double policy_tol = -1.0;
    int max_policy_iterations = -1;
    bool dump_operator = false;
    bool dump_policy = false;
    bool dump_trajectory = false;
    bool mmatrix_audit = false;
    bool no_wall_clock = false;
};

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Build the effective config JSON: start from the file (if any) and splice in
// the command-line overrides. The library owns validation.
std::string build_config_json(const Options& opt) {
    std::string base = "{}";
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config file '%s'\n", opt.config_path.c_str());
            std::exit(1);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        base = ss.str();
    }
    std::ostringstream overrides;
    auto add = [&overrides](const std::string& frag) {
        overrides << (overrides.tellp() > 0 ? "," : "") << frag;
    };
    if (!opt.problem.empty()) add("\"problem\":\"" + json_escape(opt.problem) + "\"");
    if (!opt.preset.empty()) add("\"preset\":\"" + json_escape(opt.preset) + "\"");
    if (!opt.scheme.empty()) add("\"scheme\":\"" + json_escape(opt.scheme) + "\"");
    if (!opt.output_dir.empty()) add("\"output_dir\":\"" + json_escape(opt.output_dir) + "\"");
    if (!opt.psi_sign.empty()) add("\"psi_sign\":\"" + json_escape(opt.psi_sign) + "\"");
    if (!opt.steps.empty()) {
        std::ostringstream arr;
        arr << "\"time_steps\":[";
        for (size_t i = 0; i < opt.steps.size(); ++i) arr << (i ? "," : "") << opt.steps[i];
        arr << "]";
        add(arr.str());
    }
    if (opt.theta >= 0.0) add("\"theta\":" + std::to_string(opt.theta));
    if (opt.control_samples >= 0) add("\"control_samples\":" + std::to_string(opt.control_samples));
    if (opt.policy_tol >= 0.0) {
        std::ostringstream v;
        v << "\"policy_tol\":" << opt.policy_tol;
        add(v.str());
    }
    if (opt.max_policy_iterations >= 0)
        add("\"max_policy_iterations\":" + std::to_string(opt.max_policy_iterations));
    if (opt.dump_operator) add("\"dump_operator\":true");
    if (opt.dump_policy) add("\"dump_policy\":true");
    if (opt.dump_trajectory) add("\"dump_trajectory\":true");
    if (opt.mmatrix_audit) add("\"mmatrix_audit\":true");
    if (opt.no_wall_clock) add("\"wall_clock\":false");

    const std::string extra = overrides.str();
    if (extra.empty()) return base;
    // splice overrides into the top-level object
    const auto brace = base.find_last_of('}');
    if (brace == std::string::npos) return "{" + extra + "}";
    std::string head = base.substr(0, brace);
    bool object_empty = true;
    for (size_t i = head.find('{') + 1; i < head.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(head[i]))) {
            object_empty = false;
            break;
        }
    return head + (object_empty ? "" : ",") + extra + "}";
}

int exit_code(hjbfit_status status) {
    switch (status) {
        case HJBFIT_OK: return 0;
        case HJBFIT_ERR_CONFIG: return 1;
        case HJBFIT_ERR_SOLVER: return 2;
        case HJBFIT_ERR_AUDIT: return 3;
        default: return 1;
    }
}

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("-c,--config", opt.config_path, "JSON config file");
    cmd->add_option("--problem", opt.problem, "problem name: merton3d or smoke");
    cmd->add_option("--preset", opt.preset, "merton parameter set: table1 or table2");
    cmd->add_option("--scheme", opt.scheme, "fitted, fdm or both");
    cmd->add_option("-m,--steps", opt.steps, "time step count(s)");
    cmd->add_option("--theta", opt.theta, "theta in [1/2, 1]");
    cmd->add_option("--control-samples", opt.control_samples, "control grid size");
    cmd->add_option("--policy-tol", opt.policy_tol, "policy iteration tolerance");
    cmd->add_option("--max-policy-iterations", opt.max_policy_iterations,
                    "policy iteration cap per step");
    cmd->add_option("-o,--out", opt.output_dir, "output directory");
    cmd->add_option("--psi-sign", opt.psi_sign, "derived or as-printed");
    cmd->add_flag("--dump-operator", opt.dump_operator, "write operator triplets");
    cmd->add_flag("--dump-policy", opt.dump_policy, "write the optimal control field");
    cmd->add_flag("--dump-trajectory", opt.dump_trajectory, "write per-level value and control checkpoints");
    cmd->add_flag("--mmatrix-audit", opt.mmatrix_audit, "check E and the step matrix per level");
    cmd->add_flag("--no-wall-clock", opt.no_wall_clock, "write wall_ms = 0 for byte-stable output");
}

int run_command(const Options& opt, int mode) {
    const std::string json = build_config_json(opt);
    hjbfit_config* cfg = nullptr;
    hjbfit_status st = hjbfit_config_from_json(json.c_str(), &cfg);
    if (st != HJBFIT_OK) {
        std::fprintf(stderr, "error: %s\n", hjbfit_last_error());
        return exit_code(st);
    }
    hjbfit_result* res = nullptr;
    switch (mode) {
        case 0: st = hjbfit_run(cfg, &res); break;
        case 1: st = hjbfit_convergence(cfg, &res); break;
        default: st = hjbfit_validate(cfg, &res); break;
    }
    hjbfit_config_free(cfg);
    if (st != HJBFIT_OK && !res) {
        std::fprintf(stderr, "error: %s\n", hjbfit_last_error());
        return exit_code(st);
    }

    std::printf("%s", hjbfit_result_summary(res));
    for (int i = 0; i < hjbfit_result_violation_count(res); ++i)
        std::printf("violation: %s\n", hjbfit_result_violation(res, i));
    if (st == HJBFIT_ERR_AUDIT) std::fprintf(stderr, "error: %s\n", hjbfit_last_error());
    hjbfit_result_free(res);
    return exit_code(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitted finite volume solver for degenerate HJB control problems"};
    app.require_subcommand(1);

    Options run_opt, conv_opt, val_opt;
    CLI::App* run = app.add_subcommand("run", "solve and write errors.csv");
    add_common_flags(run, run_opt);
    CLI::App* conv = app.add_subcommand("convergence", "m-sweep plus temporal order fit");
    add_common_flags(conv, conv_opt);
    CLI::App* val = app.add_subcommand("validate", "probe the coefficient hypotheses");
    add_common_flags(val, val_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (run->parsed()) return run_command(run_opt, 0);
    if (conv->parsed()) return run_command(conv_opt, 1);
    return run_command(val_opt, 2);
}
