/* C interface to the fitted HJB solver library.
 *
 * All objects are opaque handles created and destroyed here; every entry
 * point returns a status code. On failure hjbfit_last_error() describes the
 * problem for the calling thread. Strings returned through result accessors
 * stay valid until the result handle is freed.
 */
#ifndef HJBFIT_H
#define HJBFIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hjbfit_status {
    HJBFIT_OK = 0,
    HJBFIT_ERR_CONFIG = 1, /* config missing, unparsable or invalid */
    HJBFIT_ERR_SOLVER = 2, /* linear solve or assembly failure */
    HJBFIT_ERR_AUDIT = 3,  /* a requested matrix audit found violations */
    HJBFIT_ERR_ARGUMENT = 4
} hjbfit_status;

typedef struct hjbfit_config hjbfit_config;
typedef struct hjbfit_result hjbfit_result;

typedef struct hjbfit_error_row {
    const char* scheme;
    int n1, n2, n3;   /* mesh intervals per axis; 0 when absent */
    int time_steps;
    double theta;
    double l2_error;
    int max_policy_iterations;
    double wall_ms;
} hjbfit_error_row;

/* Thread-local message for the most recent failure. */
const char* hjbfit_last_error(void);

hjbfit_status hjbfit_config_from_json(const char* json_text, hjbfit_config** out);
hjbfit_status hjbfit_config_from_file(const char* path, hjbfit_config** out);
void hjbfit_config_free(hjbfit_config* config);

/* Executes the configured solves, writing errors.csv and the optional
 * artifacts into the configured output directory. On HJBFIT_ERR_AUDIT the
 * result is still produced. */
hjbfit_status hjbfit_run(const hjbfit_config* config, hjbfit_result** out);
/* Run plus a least-squares temporal-order fit (requires an m sweep). */
hjbfit_status hjbfit_convergence(const hjbfit_config* config, hjbfit_result** out);
/* Coefficient-hypothesis probes; report-only. */
hjbfit_status hjbfit_validate(const hjbfit_config* config, hjbfit_result** out);

void hjbfit_result_free(hjbfit_result* result);
const char* hjbfit_result_summary(const hjbfit_result* result);

int hjbfit_result_row_count(const hjbfit_result* result);
hjbfit_status hjbfit_result_row(const hjbfit_result* result, int index, hjbfit_error_row* out);

int hjbfit_result_order_count(const hjbfit_result* result);
hjbfit_status hjbfit_result_order(const hjbfit_result* result, int index, const char** scheme,
                                  double* slope);

int hjbfit_result_violation_count(const hjbfit_result* result);
const char* hjbfit_result_violation(const hjbfit_result* result, int index);

#ifdef __cplusplus
}
#endif

#endif /* HJBFIT_H */
