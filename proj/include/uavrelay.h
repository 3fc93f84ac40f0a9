/* C interface to the UAV relay optimizer. Handles are opaque; every function
 * that can fail returns a uvr_status, and uvr_last_error() describes the most
 * recent failure on the calling thread. */

#ifndef UAVRELAY_H
#define UAVRELAY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uvr_status {
    UVR_OK = 0,
    UVR_ERR_VALIDATION = 1, /* bad config, bad argument */
    UVR_ERR_SOLVER = 2,     /* embedded solver failure */
    UVR_ERR_IO = 3          /* file read/write failure */
} uvr_status;

typedef struct uvr_scenario uvr_scenario;
typedef struct uvr_solution uvr_solution;
typedef struct uvr_sweep_result uvr_sweep_result;

/* Message for the last failure on this thread; empty string if none. */
const char* uvr_last_error(void);

void uvr_string_free(char* s);

/* -------- scenario -------- */

/* overrides: dotted-path "key=value" strings applied before validation,
 * e.g. "slots.count=64". May be NULL when num_overrides is 0. */
uvr_status uvr_scenario_load(const char* path, const char* const* overrides,
                             size_t num_overrides, uvr_scenario** out);
uvr_status uvr_scenario_from_json(const char* json_text, const char* const* overrides,
                                  size_t num_overrides, uvr_scenario** out);
uvr_status uvr_scenario_to_json(const uvr_scenario* scenario, char** out_json);

size_t uvr_scenario_num_users(const uvr_scenario* scenario);
size_t uvr_scenario_num_slots(const uvr_scenario* scenario);
size_t uvr_scenario_warning_count(const uvr_scenario* scenario);
const char* uvr_scenario_warning(const uvr_scenario* scenario, size_t index);

void uvr_scenario_free(uvr_scenario* scenario);

/* -------- optimizer -------- */

typedef struct uvr_optimize_options {
    double rel_tol;      /* outer-loop relative improvement threshold */
    int max_outer;       /* outer-pass cap */
    double sca_rel_tol;  /* trajectory SCA improvement threshold */
    int sca_max_iters;   /* trajectory SCA iteration cap */
} uvr_optimize_options;

void uvr_optimize_options_init(uvr_optimize_options* options);

uvr_status uvr_optimize(const uvr_scenario* scenario, const uvr_optimize_options* options,
                        uvr_solution** out);

double uvr_solution_objective(const uvr_solution* solution);
double uvr_solution_alpha(const uvr_solution* solution);
void uvr_solution_trajectory(const uvr_solution* solution, double* center_x, double* center_y,
                             double* radius_m, double* altitude_m);
size_t uvr_solution_trace_length(const uvr_solution* solution);
double uvr_solution_trace_value(const uvr_solution* solution, size_t index);

void uvr_solution_free(uvr_solution* solution);

/* -------- baselines -------- */

uvr_status uvr_baseline_upper(const uvr_scenario* scenario, double* objective);
uvr_status uvr_baseline_static(const uvr_scenario* scenario, uint64_t seed, double* objective,
                               double* alpha);

/* -------- Monte Carlo sweeps -------- */

typedef struct uvr_sweep_options {
    const char* kind;   /* "stddev" | "txpower" | "radius-vs-power" | "alt-dist-grid" */
    int runs_per_point; /* >= 1 */
    uint64_t master_seed;
    int parallelism;    /* worker threads, >= 1 */
    int include_timing; /* 0 zeroes wall_ms for byte-reproducible output */
} uvr_sweep_options;

void uvr_sweep_options_init(uvr_sweep_options* options);

uvr_status uvr_sweep_run(const uvr_scenario* base, const uvr_sweep_options* options,
                         uvr_sweep_result** out);

size_t uvr_sweep_record_count(const uvr_sweep_result* result);
size_t uvr_sweep_failure_count(const uvr_sweep_result* result);

/* format: "csv" or "json" */
uvr_status uvr_sweep_write(const uvr_sweep_result* result, const char* path, const char* format);

void uvr_sweep_free(uvr_sweep_result* result);

#ifdef __cplusplus
}
#endif

#endif /* UAVRELAY_H */
