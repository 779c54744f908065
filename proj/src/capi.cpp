#include "hjbfit.h"

#include "hjbfit/experiment.hpp"

#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

} // namespace

struct hjbfit_config {
    hjbfit::RunConfig cfg;
};

struct hjbfit_result {
    hjbfit::RunResult res;
};

extern "C" {

const char* hjbfit_last_error(void) { return g_last_error.c_str(); }

hjbfit_status hjbfit_config_from_json(const char* json_text, hjbfit_config** out) {
    if (!json_text || !out) {
        set_error("null argument");
        return HJBFIT_ERR_ARGUMENT;
    }
    try {
        auto* handle = new hjbfit_config{hjbfit::parse_config(json_text)};
        *out = handle;
        return HJBFIT_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HJBFIT_ERR_CONFIG;
    }
}

hjbfit_status hjbfit_config_from_file(const char* path, hjbfit_config** out) {
    if (!path || !out) {
        set_error("null argument");
        return HJBFIT_ERR_ARGUMENT;
    }
    try {
        auto* handle = new hjbfit_config{hjbfit::load_config_file(path)};
        *out = handle;
        return HJBFIT_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HJBFIT_ERR_CONFIG;
    }
}

void hjbfit_config_free(hjbfit_config* config) { delete config; }

static hjbfit_status run_mode(const hjbfit_config* config, hjbfit_result** out, int mode) {
    if (!config || !out) {
        set_error("null argument");
        return HJBFIT_ERR_ARGUMENT;
    }
    try {
        hjbfit::RunResult res;
        switch (mode) {
            case 0: res = hjbfit::run_experiment(config->cfg); break;
            case 1: res = hjbfit::run_convergence(config->cfg); break;
            default: res = hjbfit::run_validate(config->cfg); break;
        }
        const bool audit_failed = !res.mmatrix_ok;
        *out = new hjbfit_result{std::move(res)};
        if (audit_failed) {
            set_error("matrix audit found violations; see mmatrix_audit.txt");
            return HJBFIT_ERR_AUDIT;
        }
        return HJBFIT_OK;
    } catch (const hjbfit::ConfigError& e) {
        set_error(e.what());
        return HJBFIT_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HJBFIT_ERR_SOLVER;
    }
}

hjbfit_status hjbfit_run(const hjbfit_config* config, hjbfit_result** out) {
    return run_mode(config, out, 0);
}

hjbfit_status hjbfit_convergence(const hjbfit_config* config, hjbfit_result** out) {
    return run_mode(config, out, 1);
}

hjbfit_status hjbfit_validate(const hjbfit_config* config, hjbfit_result** out) {
    return run_mode(config, out, 2);
}

void hjbfit_result_free(hjbfit_result* result) { delete result; }

const char* hjbfit_result_summary(const hjbfit_result* result) {
    return result ? result->res.summary.c_str() : "";
}

int hjbfit_result_row_count(const hjbfit_result* result) {
    return result ? static_cast<int>(result->res.errors.size()) : 0;
}

hjbfit_status hjbfit_result_row(const hjbfit_result* result, int index, hjbfit_error_row* out) {
    if (!result || !out || index < 0 || index >= hjbfit_result_row_count(result)) {
        set_error("row index out of range");
        return HJBFIT_ERR_ARGUMENT;
    }
    const auto& r = result->res.errors[static_cast<size_t>(index)];
    out->scheme = r.scheme.c_str();
    out->n1 = r.mesh_intervals.size() > 0 ? r.mesh_intervals[0] : 0;
    out->n2 = r.mesh_intervals.size() > 1 ? r.mesh_intervals[1] : 0;
    out->n3 = r.mesh_intervals.size() > 2 ? r.mesh_intervals[2] : 0;
    out->time_steps = r.time_steps;
    out->theta = r.theta;
    out->l2_error = r.l2_error;
    out->max_policy_iterations = r.max_policy_iterations;
    out->wall_ms = r.wall_ms;
    return HJBFIT_OK;
}

int hjbfit_result_order_count(const hjbfit_result* result) {
    return result ? static_cast<int>(result->res.orders.size()) : 0;
}

hjbfit_status hjbfit_result_order(const hjbfit_result* result, int index, const char** scheme,
                                  double* slope) {
    if (!result || index < 0 || index >= hjbfit_result_order_count(result)) {
        set_error("order index out of range");
        return HJBFIT_ERR_ARGUMENT;
    }
    const auto& o = result->res.orders[static_cast<size_t>(index)];
    if (scheme) *scheme = o.first.c_str();
    if (slope) *slope = o.second;
    return HJBFIT_OK;
}

int hjbfit_result_violation_count(const hjbfit_result* result) {
    return result ? static_cast<int>(result->res.violations.size()) : 0;
}

const char* hjbfit_result_violation(const hjbfit_result* result, int index) {
    if (!result || index < 0 || index >= hjbfit_result_violation_count(result)) return "";
    return result->res.violations[static_cast<size_t>(index)].c_str();
}

} // extern "C"
