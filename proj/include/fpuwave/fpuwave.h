#ifndef FPUWAVE_FPUWAVE_H
#define FPUWAVE_FPUWAVE_H

#include <stddef.h>

#if defined(_WIN32)
#  define FPW_API __declspec(dllexport)
#else
#  define FPW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpw_status {
    FPW_OK = 0,
    FPW_ERR_INVALID_ARGUMENT = 1,
    FPW_ERR_CONFIG = 2,
    FPW_ERR_NOT_CONVERGED = 3,
    FPW_ERR_OVERFLOW = 4,
    FPW_ERR_NUMERICAL = 5, /* e.g. every sweep row failed, or a verify criterion failed */
    FPW_ERR_IO = 6,
    FPW_ERR_INTERNAL = 7
} fpw_status;

typedef enum fpw_scaled_kind {
    FPW_SCALED_TIP = 0,
    FPW_SCALED_TRANSITION = 1,
    FPW_SCALED_FOOT = 2
} fpw_scaled_kind;

typedef enum fpw_command {
    FPW_CMD_SOLVE = 0,
    FPW_CMD_SWEEP = 1,
    FPW_CMD_VERIFY = 2,
    FPW_CMD_FIGURES_DATA = 3
} fpw_command;

typedef struct fpw_model fpw_model;
typedef struct fpw_grid fpw_grid;
typedef struct fpw_solution fpw_solution;
typedef struct fpw_sweep fpw_sweep;
typedef struct fpw_config fpw_config;

typedef struct fpw_scalars {
    double delta;
    double lambda_sq;
    double log_lambda_sq;
    double sigma;
    double r_peak;
    double a;
    double b;
    double energy;
    double log_energy;
    double residual;
    double last_update;
    double max_energy_drop;
    long iterations;
    int converged;
} fpw_scalars;

typedef struct fpw_sweep_row {
    double delta;
    int ok;
    double lambda_sq;
    double a;
    double b;
    double sigma;
    double residual;
    long iterations;
    double speed_ratio;
    double b_coefficient;
    double a_coefficient;
    /* indexed [0] = 1-norm, [1] = 2-norm, [2] = max norm */
    double err_v_approx[3];
    double err_r_approx[3];
    double err_v_limit[3];
    double err_r_limit[3];
} fpw_sweep_row;

/* Message of the last failed call on this thread ("" if none). */
FPW_API const char* fpw_last_error(void);
FPW_API const char* fpw_status_string(fpw_status status);
FPW_API const char* fpw_version(void);
/* Frees strings returned through char** out-parameters. */
FPW_API void fpw_string_free(char* s);

/* Force models. c[j-1] is the coefficient of r^j (may be NULL when nc = 0). */
FPW_API fpw_status fpw_model_power(int m, const double* c, size_t nc, fpw_model** out);
FPW_API fpw_status fpw_model_toda(fpw_model** out);
FPW_API void fpw_model_free(fpw_model* model);
FPW_API fpw_status fpw_model_mu(const fpw_model* model, double* out);
FPW_API fpw_status fpw_model_force(const fpw_model* model, double r, double* out);
FPW_API fpw_status fpw_model_log_force(const fpw_model* model, double r, double* out);
FPW_API fpw_status fpw_model_potential(const fpw_model* model, double r, double* out);

/* Periodic grid on [-L, L] with 2k samples per unit length. */
FPW_API fpw_status fpw_grid_new(int L, int k, fpw_grid** out);
FPW_API void fpw_grid_free(fpw_grid* grid);
FPW_API size_t fpw_grid_size(const fpw_grid* grid);
FPW_API fpw_status fpw_grid_nodes(const fpw_grid* grid, double* out, size_t n);

/* On FPW_ERR_NOT_CONVERGED *out still receives the last iterate. */
FPW_API fpw_status fpw_solve(const fpw_model* model, const fpw_grid* grid, double delta,
                             double tol, long max_iter, fpw_solution** out);
FPW_API void fpw_solution_free(fpw_solution* sol);
FPW_API fpw_status fpw_solution_scalars(const fpw_solution* sol, fpw_scalars* out);
FPW_API size_t fpw_solution_size(const fpw_solution* sol);
FPW_API fpw_status fpw_solution_velocity(const fpw_solution* sol, double* out, size_t n);
FPW_API fpw_status fpw_solution_distance(const fpw_solution* sol, double* out, size_t n);
/* Each array holds `samples` values; d2 may be NULL and is NaN-filled for the transition. */
FPW_API fpw_status fpw_solution_scaled(const fpw_solution* sol, const fpw_model* model,
                                       fpw_scaled_kind kind, size_t samples, double* y,
                                       double* values, double* d1, double* d2);

/* Deltas must be strictly descending in (0, 0.5]. */
FPW_API fpw_status fpw_sweep_run(const fpw_model* model, const fpw_grid* grid,
                                 const double* deltas, size_t n, double tol, long max_iter,
                                 fpw_sweep** out);
FPW_API void fpw_sweep_free(fpw_sweep* sweep);
FPW_API size_t fpw_sweep_rows(const fpw_sweep* sweep);
FPW_API fpw_status fpw_sweep_row_get(const fpw_sweep* sweep, size_t i, fpw_sweep_row* out);
/* Names: R_approx_inf, R_approx_1, V_approx_inf, V_approx_1, V_limit_1. */
FPW_API fpw_status fpw_sweep_fit(const fpw_sweep* sweep, const char* name, double* slope,
                                 double* stderr_slope);
FPW_API fpw_status fpw_sweep_json(const fpw_sweep* sweep, char** out);

/* Closed forms. */
FPW_API fpw_status fpw_approx_velocity(double delta, double x, double* out);
FPW_API fpw_status fpw_approx_distance(double delta, double x, double* out);
/* out[0..2] = S0, S0', S0'' */
FPW_API fpw_status fpw_limit_tip(double y, double out[3]);
FPW_API fpw_status fpw_limit_transition(double y, double* out);
FPW_API fpw_status fpw_limit_foot(double y, double* out);
FPW_API fpw_status fpw_predicted_scalars(double delta, double mu, double* log_lambda_sq,
                                         double* b, double* a);
FPW_API fpw_status fpw_toda_exact(double beta, double x, double* velocity, double* distance,
                                  double* speed);
FPW_API fpw_status fpw_estimate_order(const double* deltas, const double* errors, size_t n,
                                      double* slope, double* stderr_slope);

/* Run configuration: JSON text (NULL or "" for defaults) plus overrides. */
FPW_API fpw_status fpw_config_new(const char* json_text, fpw_config** out);
FPW_API void fpw_config_free(fpw_config* cfg);
/* "toda" or "power:<m>[:c1,c2,...]" */
FPW_API fpw_status fpw_config_set_model(fpw_config* cfg, const char* spec);
FPW_API fpw_status fpw_config_set_delta(fpw_config* cfg, double delta);
FPW_API fpw_status fpw_config_set_L(fpw_config* cfg, int L);
FPW_API fpw_status fpw_config_set_k(fpw_config* cfg, int k);
FPW_API fpw_status fpw_config_set_tol(fpw_config* cfg, double tol);
FPW_API fpw_status fpw_config_set_output_dir(fpw_config* cfg, const char* dir);
FPW_API fpw_status fpw_config_set_toda_only(fpw_config* cfg, int on);

/* Runs a command and writes its outputs. *report (may be NULL) receives a JSON
   document {"status", "lines", "report"}; free it with fpw_string_free. */
FPW_API fpw_status fpw_run(fpw_command cmd, const fpw_config* cfg, char** report);

#ifdef __cplusplus
}
#endif

#endif
