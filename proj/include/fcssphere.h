/* C interface of the fcssphere library: finite-control-set MPC of a
 * grid-connected three-level converter with switching-frequency tracking
 * (FT) and limiting (FL) controllers solved by sphere decoders, plus the
 * closed-loop benchmark harness.
 *
 * All functions return fcs_status unless noted; fcs_last_error() describes
 * the most recent failure on the calling thread. Handles are opaque and
 * owned by the caller through the matching _destroy call.
 */
#ifndef FCSSPHERE_H
#define FCSSPHERE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define FCS_API __declspec(dllexport)
#else
#  define FCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcs_status {
    FCS_OK = 0,
    FCS_ERR_INVALID_ARGUMENT = 1,
    FCS_ERR_BAD_CONFIG = 2,
    FCS_ERR_NOT_POSITIVE_DEFINITE = 3,
    FCS_ERR_IO = 4,
    FCS_ERR_OUT_OF_RANGE = 5,
    FCS_ERR_INTERNAL = 6
} fcs_status;

typedef enum fcs_controller {
    FCS_CONTROLLER_FT = 0,
    FCS_CONTROLLER_FL = 1
} fcs_controller;

typedef enum fcs_scenario_id {
    FCS_SCENARIO_STEADY = 0,
    FCS_SCENARIO_RAMP = 1,
    FCS_SCENARIO_STEP = 2,
    FCS_SCENARIO_FSWSTEP = 3
} fcs_scenario_id;

typedef struct fcs_config fcs_config;
typedef struct fcs_trace fcs_trace;

/* One control-step record of a closed-loop run. Currents are three-phase
 * (reconstructed from the stationary-frame samples). */
typedef struct fcs_trace_row {
    double t;
    double i_ref_a, i_ref_b, i_ref_c;
    double i_a, i_b, i_c;
    int u_a, u_b, u_c;
    int p_a, p_b, p_c;
    double fsw;
    double fsw_visual;
    double fsw_ref;
    double solve_us;
    uint64_t nodes;
} fcs_trace_row;

typedef struct fcs_metrics {
    double tdd_percent;
    double tracking_error_percent;
    double fsw_avg_hz;
    double solve_us_total;
    double solve_us_max;
    double solve_us_p70;
    double solve_us_p95;
    uint64_t nodes_total;
    uint64_t nodes_max;
    uint64_t nodes_p70;
    uint64_t nodes_p95;
    double window_t0;
    double window_T;
} fcs_metrics;

FCS_API const char* fcs_version(void);

/* Message for the most recent error on this thread ("" if none). */
FCS_API const char* fcs_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Fresh configuration with the baseline parameter set. Never fails. */
FCS_API fcs_config* fcs_config_create(void);
FCS_API void fcs_config_destroy(fcs_config* cfg);

/* Merge a sectioned key=value file into cfg. */
FCS_API fcs_status fcs_config_load(fcs_config* cfg, const char* path);

/* Set/get one "section.key" value as text, e.g. "system.L", "controller.N_p". */
FCS_API fcs_status fcs_config_set(fcs_config* cfg, const char* key, const char* value);
FCS_API fcs_status fcs_config_get(const fcs_config* cfg, const char* key,
                                  char* buf, size_t buf_size);

/* ---- simulation -------------------------------------------------------- */

/* Run one closed-loop scenario. use_bound toggles the FL decoder's
 * future-cost pruning bound (ignored for FT). */
FCS_API fcs_status fcs_simulate(const fcs_config* cfg, fcs_scenario_id scenario,
                                fcs_controller controller, int use_bound,
                                fcs_trace** out_trace);

FCS_API void fcs_trace_destroy(fcs_trace* trace);
FCS_API size_t fcs_trace_length(const fcs_trace* trace);
FCS_API fcs_status fcs_trace_get_row(const fcs_trace* trace, size_t index,
                                     fcs_trace_row* out_row);

/* Metrics over the scenario's measurement window, or an explicit one. */
FCS_API fcs_status fcs_trace_metrics(const fcs_trace* trace, fcs_metrics* out);
FCS_API fcs_status fcs_trace_metrics_window(const fcs_trace* trace, double t0, double T,
                                            fcs_metrics* out);

/* ---- verification ------------------------------------------------------ */

/* Test hook: corrupt the Hessian before the factorization residual check
 * (the suite must then fail). */
#define FCS_VERIFY_PERTURB_HESSIAN 0x1u

/* Run the seeded verification suites. Writes the report into report_buf
 * (truncated if needed, always NUL-terminated when buf_size > 0) and the
 * number of failed suites into out_failures. Returns FCS_OK even when
 * suites fail; inspect out_failures. */
FCS_API fcs_status fcs_verify(const fcs_config* cfg, uint64_t seed, unsigned flags,
                              char* report_buf, size_t buf_size, int* out_failures);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FCSSPHERE_H */
