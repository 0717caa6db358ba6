#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fpuwave/fpuwave.h"

static int failures = 0;

#define CHECK(cond)                                                          \
    do {                                                                     \
        if (!(cond)) {                                                       \
            fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                      \
        }                                                                    \
    } while (0)

static void test_errors(void) {
    fpw_model* m = NULL;
    const double neg[1] = {-1.0};
    CHECK(fpw_model_power(2, neg, 1, &m) == FPW_ERR_INVALID_ARGUMENT);
    CHECK(m == NULL);
    CHECK(strlen(fpw_last_error()) > 0);
    CHECK(fpw_model_toda(NULL) == FPW_ERR_INVALID_ARGUMENT);
    CHECK(strcmp(fpw_status_string(FPW_OK), "ok") == 0);
    CHECK(strlen(fpw_version()) > 0);

    fpw_grid* g = NULL;
    CHECK(fpw_grid_new(2, 8, &g) == FPW_ERR_INVALID_ARGUMENT);
    fpw_model_free(NULL);
    fpw_grid_free(NULL);
    fpw_solution_free(NULL);
    fpw_sweep_free(NULL);
    fpw_config_free(NULL);
    fpw_string_free(NULL);
}

static void test_models(void) {
    fpw_model* m = NULL;
    const double c[1] = {2.0};
    CHECK(fpw_model_power(2, c, 1, &m) == FPW_OK);
    double v = 0.0;
    CHECK(fpw_model_force(m, 1.0, &v) == FPW_OK);
    CHECK(fabs(v - 3.0 * exp(1.0)) < 1e-14);
    CHECK(fpw_model_potential(m, 2.0, &v) == FPW_OK);
    CHECK(fabs(v - 4.0 * exp(2.0)) < 1e-12);
    CHECK(fpw_model_log_force(m, 1.0, &v) == FPW_OK);
    CHECK(fabs(v - log(3.0) - 1.0) < 1e-14);
    CHECK(fpw_model_mu(m, &v) == FPW_OK && v == 2.0);
    CHECK(fpw_model_force(m, -1.0, &v) == FPW_ERR_INVALID_ARGUMENT);
    fpw_model_free(m);
}

static void test_solve(void) {
    fpw_model* m = NULL;
    fpw_grid* g = NULL;
    fpw_solution* s = NULL;
    CHECK(fpw_model_toda(&m) == FPW_OK);
    CHECK(fpw_grid_new(3, 64, &g) == FPW_OK);
    CHECK(fpw_grid_size(g) == 768);

    CHECK(fpw_solve(m, g, 0.6, 1e-12, 1000, &s) == FPW_ERR_INVALID_ARGUMENT);
    CHECK(s == NULL);

    CHECK(fpw_solve(m, g, 0.27, 1e-12, 200000, &s) == FPW_OK);
    fpw_scalars sc;
    CHECK(fpw_solution_scalars(s, &sc) == FPW_OK);
    CHECK(sc.converged == 1);
    CHECK(sc.residual <= 1e-10);
    CHECK(sc.delta == 0.27);
    CHECK(fpw_solution_size(s) == 768);

    double* x = malloc(768 * sizeof(double));
    double* v = malloc(768 * sizeof(double));
    double* r = malloc(768 * sizeof(double));
    CHECK(fpw_grid_nodes(g, x, 768) == FPW_OK);
    CHECK(fpw_solution_velocity(s, v, 768) == FPW_OK);
    CHECK(fpw_solution_distance(s, r, 768) == FPW_OK);
    CHECK(fpw_solution_velocity(s, v, 10) == FPW_ERR_INVALID_ARGUMENT);
    double norm = 0.0;
    for (int i = 0; i < 768; ++i) norm += v[i] * v[i];
    CHECK(fabs(norm / 128.0 - 1.0) < 1e-12);
    CHECK(fabs(x[384] + x[383]) < 1e-15);
    CHECK(fabs(v[100] - v[667]) < 1e-12);
    free(x);
    free(v);
    free(r);

    double y[65], val[65], d1[65], d2[65];
    CHECK(fpw_solution_scaled(s, m, FPW_SCALED_TIP, 65, y, val, d1, d2) == FPW_OK);
    CHECK(y[32] == 0.0);
    CHECK(fabs(val[32]) < 1e-12);
    CHECK(fpw_solution_scaled(s, m, FPW_SCALED_TRANSITION, 65, y, val, d1, NULL) == FPW_OK);
    CHECK(fpw_solution_scaled(s, m, FPW_SCALED_TRANSITION, 65, y, val, d1, d2) == FPW_OK);
    CHECK(isnan(d2[0]));
    fpw_solution_free(s);

    s = NULL;
    CHECK(fpw_solve(m, g, 0.1, 1e-12, 2, &s) == FPW_ERR_NOT_CONVERGED);
    CHECK(s != NULL);
    CHECK(fpw_solution_scalars(s, &sc) == FPW_OK);
    CHECK(sc.converged == 0);
    CHECK(sc.iterations == 2);
    fpw_solution_free(s);

    fpw_grid_free(g);
    fpw_model_free(m);
}

static void test_sweep(void) {
    fpw_model* m = NULL;
    fpw_grid* g = NULL;
    fpw_sweep* sw = NULL;
    const double c[1] = {2.0};
    const double deltas[4] = {0.27, 0.18, 0.12, 0.09};
    const double up[3] = {0.1, 0.2, 0.3};
    CHECK(fpw_model_power(2, c, 1, &m) == FPW_OK);
    CHECK(fpw_grid_new(3, 32, &g) == FPW_OK);
    CHECK(fpw_sweep_run(m, g, up, 3, 1e-12, 1000, &sw) == FPW_ERR_INVALID_ARGUMENT);
    CHECK(fpw_sweep_run(m, g, deltas, 4, 1e-12, 200000, &sw) == FPW_OK);
    CHECK(fpw_sweep_rows(sw) == 4);
    fpw_sweep_row row;
    CHECK(fpw_sweep_row_get(sw, 3, &row) == FPW_OK);
    CHECK(row.ok == 1);
    CHECK(row.delta == 0.09);
    CHECK(row.err_v_approx[2] < row.err_v_limit[2]);
    CHECK(fpw_sweep_row_get(sw, 4, &row) == FPW_ERR_INVALID_ARGUMENT);
    double slope = 0.0, se = 0.0;
    CHECK(fpw_sweep_fit(sw, "R_approx_inf", &slope, &se) == FPW_OK);
    CHECK(slope > 1.5 && slope < 2.5);
    CHECK(fpw_sweep_fit(sw, "nope", &slope, &se) == FPW_ERR_INVALID_ARGUMENT);
    char* js = NULL;
    CHECK(fpw_sweep_json(sw, &js) == FPW_OK);
    CHECK(js != NULL && strstr(js, "\"fits\"") != NULL);
    fpw_string_free(js);
    fpw_sweep_free(sw);
    fpw_grid_free(g);
    fpw_model_free(m);
}

static void test_closed_forms(void) {
    double v = 0.0, r = 0.0, sp = 0.0;
    double tip[3];
    CHECK(fpw_approx_velocity(0.09, 0.0, &v) == FPW_OK);
    CHECK(fabs(v - 1.09 * tanh(0.25 / 0.09)) < 1e-14);
    CHECK(fpw_approx_distance(0.09, 0.0, &v) == FPW_OK);
    CHECK(fpw_limit_tip(0.0, tip) == FPW_OK);
    CHECK(tip[0] == 0.0 && tip[1] == 0.0 && tip[2] == 2.0);
    CHECK(fpw_limit_transition(0.0, &v) == FPW_OK && v == 1.0);
    CHECK(fpw_limit_foot(0.0, &v) == FPW_OK && fabs(v - log(2.0)) < 1e-15);
    double ll = 0.0, b = 0.0, a = 0.0;
    CHECK(fpw_predicted_scalars(0.1, 2.0, &ll, &b, &a) == FPW_OK);
    CHECK(fabs(b - 0.18) < 1e-15);
    CHECK(fpw_toda_exact(0.5, 0.0, &v, &r, &sp) == FPW_OK);
    CHECK(fabs(sp - 0.5 * sinh(2.0)) < 1e-14);
    CHECK(fpw_toda_exact(-1.0, 0.0, &v, &r, &sp) == FPW_ERR_INVALID_ARGUMENT);
    const double d[3] = {0.3, 0.2, 0.1};
    const double e[3] = {0.09, 0.04, 0.01};
    double slope = 0.0, se = 0.0;
    CHECK(fpw_estimate_order(d, e, 3, &slope, &se) == FPW_OK);
    CHECK(fabs(slope - 2.0) < 1e-12);
    CHECK(fpw_estimate_order(d, e, 2, &slope, &se) == FPW_ERR_INVALID_ARGUMENT);
}

static void test_config_and_run(const char* outdir) {
    fpw_config* cfg = NULL;
    CHECK(fpw_config_new("{bad", &cfg) == FPW_ERR_CONFIG);
    CHECK(fpw_config_new("{\"colour\": 1}", &cfg) == FPW_ERR_CONFIG);
    CHECK(fpw_config_new(NULL, &cfg) == FPW_OK);
    CHECK(fpw_config_set_model(cfg, "bogus") == FPW_ERR_CONFIG);

    char* rep = NULL;
    CHECK(fpw_config_set_output_dir(cfg, outdir) == FPW_OK);
    CHECK(fpw_run(FPW_CMD_SOLVE, cfg, &rep) == FPW_ERR_CONFIG);
    CHECK(rep == NULL);

    CHECK(fpw_config_set_model(cfg, "toda") == FPW_OK);
    CHECK(fpw_config_set_delta(cfg, 0.6) == FPW_OK);
    CHECK(fpw_run(FPW_CMD_SOLVE, cfg, NULL) == FPW_ERR_CONFIG);

    CHECK(fpw_config_set_delta(cfg, 0.27) == FPW_OK);
    CHECK(fpw_config_set_k(cfg, 32) == FPW_OK);
    CHECK(fpw_run(FPW_CMD_SOLVE, cfg, &rep) == FPW_OK);
    CHECK(rep != NULL && strstr(rep, "\"converged\"") != NULL);
    fpw_string_free(rep);
    fpw_config_free(cfg);
}

int main(int argc, char** argv) {
    test_errors();
    test_models();
    test_solve();
    test_sweep();
    test_closed_forms();
    test_config_and_run(argc > 1 ? argv[1] : "capi-out");
    if (failures) {
        fprintf(stderr, "%d check(s) failed\n", failures);
        return 1;
    }
    printf("all C API checks passed\n");
    return 0;
}
