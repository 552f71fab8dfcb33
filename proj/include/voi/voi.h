/* C interface to the value-of-information library.
 *
 * Opaque handles, integer status codes, and text outputs.  Every analysis
 * returns an output set: a list of named text parts (CSV or JSON) that the
 * caller writes wherever it wants.  Status codes double as process exit
 * codes: 0 ok, 2 parse error, 3 validation error, 4 numeric non-convergence,
 * 5 invalid argument / unsupported request.
 */
#ifndef VOI_H
#define VOI_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    VOI_OK = 0,
    VOI_ERR_PARSE = 2,
    VOI_ERR_VALIDATION = 3,
    VOI_ERR_NUMERIC = 4,
    VOI_ERR_INVALID = 5
} voi_status;

typedef struct voi_problem voi_problem;
typedef struct voi_output voi_output;

typedef struct {
    double epsilon;           /* theorem-1 neighborhood radius (default 0.05) */
    double grid_pitch;        /* constant-estimation grid pitch (default 1e-3) */
    double value_grid_pitch;  /* belief grid for `value`; <= 0 means default */
    unsigned long long seed;  /* echoed into output metadata */
    int format_json;          /* 1 = JSON (default), 0 = CSV where supported */
    const double* prior;      /* optional prior override, length prior_len */
    size_t prior_len;
} voi_options;

typedef struct {
    double alpha;
    double fee;
    double wealth;
    double risk_aversion;
} voi_insurance_params;

const char* voi_version(void);

/* Message for the most recent failure on this thread. */
const char* voi_last_error(void);

void voi_options_init(voi_options* opts);
void voi_insurance_params_init(voi_insurance_params* params);

voi_status voi_problem_load_file(const char* path, voi_problem** out);
voi_status voi_problem_parse(const char* json_text, voi_problem** out);
void voi_problem_free(voi_problem* problem);
int voi_problem_num_states(const voi_problem* problem);
int voi_problem_has_information(const voi_problem* problem);

/* command is one of: value, voi, bounds, confidence, classify. */
voi_status voi_run(const voi_problem* problem, const char* command,
                   const voi_options* opts, voi_output** out);

voi_status voi_run_insurance(const voi_insurance_params* params, const voi_options* opts,
                             voi_output** out);
voi_status voi_run_table2(const voi_options* opts, voi_output** out);

int voi_output_count(const voi_output* output);
const char* voi_output_name(const voi_output* output, int index);
const char* voi_output_text(const voi_output* output, int index);
/* 1 when the run recorded a numeric non-convergence (exit code 4 advised). */
int voi_output_numeric_failure(const voi_output* output);
void voi_output_free(voi_output* output);

/* Scalar conveniences. */
voi_status voi_insurance_threshold(const voi_insurance_params* params, double* p_star);

#ifdef __cplusplus
}
#endif

#endif /* VOI_H */
