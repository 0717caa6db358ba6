#include "fpuwave/fpuwave.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "analysis.hpp"
#include "asymptotics.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"

using namespace fpuwave;

struct fpw_model {
    ForceModel model;
};
struct fpw_grid {
    PeriodicGrid grid;
};
struct fpw_solution {
    WaveSolution sol;
};
struct fpw_sweep {
    SweepReport report;
};
struct fpw_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

fpw_status fail(fpw_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
fpw_status wrap_catch(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const ConfigError& e) {
        return fail(FPW_ERR_CONFIG, e.what());
    } catch (const IoError& e) {
        return fail(FPW_ERR_IO, e.what());
    } catch (const NotConverged& e) {
        return fail(FPW_ERR_NOT_CONVERGED, e.what());
    } catch (const OverflowError& e) {
        return fail(FPW_ERR_OVERFLOW, e.what());
    } catch (const InvalidArgument& e) {
        return fail(FPW_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FPW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FPW_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FPW_ERR_INTERNAL, "unknown error");
    }
}

#define FPW_REQUIRE(cond, what)                                                                    \
    do {                                                                                           \
        if (!(cond)) return fail(FPW_ERR_INVALID_ARGUMENT, what);                                 \
    } while (0)

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fpw_status copy_out(std::span<const double> src, double* out, size_t n) {
    FPW_REQUIRE(out, "output buffer is NULL");
    FPW_REQUIRE(n >= src.size(), "output buffer too small");
    std::copy(src.begin(), src.end(), out);
    return FPW_OK;
}

void fill_norms(const NormTriple& t, double out[3]) {
    out[0] = t.l1;
    out[1] = t.l2;
    out[2] = t.linf;
}

} // namespace

extern "C" {

const char* fpw_last_error(void) { return g_last_error.c_str(); }

const char* fpw_status_string(fpw_status status) {
    switch (status) {
    case FPW_OK: return "ok";
    case FPW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FPW_ERR_CONFIG: return "configuration error";
    case FPW_ERR_NOT_CONVERGED: return "not converged";
    case FPW_ERR_OVERFLOW: return "overflow";
    case FPW_ERR_NUMERICAL: return "numerical failure";
    case FPW_ERR_IO: return "i/o error";
    case FPW_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* fpw_version(void) { return "0.1.0"; }

void fpw_string_free(char* s) { std::free(s); }

fpw_status fpw_model_power(int m, const double* c, size_t nc, fpw_model** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        FPW_REQUIRE(nc == 0 || c, "coefficients are NULL");
        std::vector<double> cv(c, c + nc);
        *out = new fpw_model{power_family(m, std::move(cv))};
        return FPW_OK;
    });
}

fpw_status fpw_model_toda(fpw_model** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        *out = new fpw_model{toda()};
        return FPW_OK;
    });
}

void fpw_model_free(fpw_model* model) { delete model; }

fpw_status fpw_model_mu(const fpw_model* model, double* out) {
    FPW_REQUIRE(model && out, "NULL argument");
    *out = model->model.mu();
    return FPW_OK;
}

fpw_status fpw_model_force(const fpw_model* model, double r, double* out) {
    return wrap_catch([&] {
        FPW_REQUIRE(model && out, "NULL argument");
        *out = model->model.force(r);
        return FPW_OK;
    });
}

fpw_status fpw_model_log_force(const fpw_model* model, double r, double* out) {
    return wrap_catch([&] {
        FPW_REQUIRE(model && out, "NULL argument");
        *out = model->model.log_force(r);
        return FPW_OK;
    });
}

fpw_status fpw_model_potential(const fpw_model* model, double r, double* out) {
    return wrap_catch([&] {
        FPW_REQUIRE(model && out, "NULL argument");
        *out = model->model.potential(r);
        return FPW_OK;
    });
}

fpw_status fpw_grid_new(int L, int k, fpw_grid** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        *out = new fpw_grid{PeriodicGrid::make(L, k)};
        return FPW_OK;
    });
}

void fpw_grid_free(fpw_grid* grid) { delete grid; }

size_t fpw_grid_size(const fpw_grid* grid) { return grid ? grid->grid.size() : 0; }

fpw_status fpw_grid_nodes(const fpw_grid* grid, double* out, size_t n) {
    FPW_REQUIRE(grid, "grid is NULL");
    const auto x = grid->grid.nodes();
    return copy_out(x, out, n);
}

fpw_status fpw_solve(const fpw_model* model, const fpw_grid* grid, double delta, double tol,
                     long max_iter, fpw_solution** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(model && grid && out, "NULL argument");
        *out = nullptr;
        SolverOptions so;
        so.tol = tol;
        so.max_iter = max_iter;
        try {
            *out = new fpw_solution{solve_wave(model->model, delta, grid->grid, so)};
        } catch (const NotConverged& e) {
            *out = new fpw_solution{e.last()};
            throw;
        }
        return FPW_OK;
    });
}

void fpw_solution_free(fpw_solution* sol) { delete sol; }

fpw_status fpw_solution_scalars(const fpw_solution* sol, fpw_scalars* out) {
    FPW_REQUIRE(sol && out, "NULL argument");
    const auto& s = sol->sol;
    *out = fpw_scalars{s.delta,    s.lambda_sq,  s.log_lambda_sq, s.sigma,
                       s.r_peak,   s.a,          s.b,             s.energy,
                       s.log_energy, s.residual_inf, s.last_update, s.max_relative_energy_drop,
                       s.iterations, s.converged ? 1 : 0};
    return FPW_OK;
}

size_t fpw_solution_size(const fpw_solution* sol) { return sol ? sol->sol.V.size() : 0; }

fpw_status fpw_solution_velocity(const fpw_solution* sol, double* out, size_t n) {
    FPW_REQUIRE(sol, "solution is NULL");
    return copy_out(sol->sol.V.values(), out, n);
}

fpw_status fpw_solution_distance(const fpw_solution* sol, double* out, size_t n) {
    FPW_REQUIRE(sol, "solution is NULL");
    return copy_out(sol->sol.R.values(), out, n);
}

fpw_status fpw_solution_scaled(const fpw_solution* sol, const fpw_model* model,
                               fpw_scaled_kind kind, size_t samples, double* y, double* values,
                               double* d1, double* d2) {
    return wrap_catch([&] {
        FPW_REQUIRE(sol && model && y && values && d1, "NULL argument");
        ScaledProfile p = [&] {
            switch (kind) {
            case FPW_SCALED_TIP: return tip_profile(sol->sol, model->model, samples);
            case FPW_SCALED_TRANSITION: return transition_profile(sol->sol, model->model, samples);
            case FPW_SCALED_FOOT: return foot_profile(sol->sol, model->model, samples);
            }
            throw InvalidArgument("unknown scaled profile kind");
        }();
        std::copy(p.y.begin(), p.y.end(), y);
        std::copy(p.values.begin(), p.values.end(), values);
        std::copy(p.d1.begin(), p.d1.end(), d1);
        if (d2) {
            if (p.d2.empty()) {
                std::fill(d2, d2 + samples, std::nan(""));
            } else {
                std::copy(p.d2.begin(), p.d2.end(), d2);
            }
        }
        return FPW_OK;
    });
}

fpw_status fpw_sweep_run(const fpw_model* model, const fpw_grid* grid, const double* deltas,
                         size_t n, double tol, long max_iter, fpw_sweep** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(model && grid && out && (n == 0 || deltas), "NULL argument");
        SweepOptions so;
        so.solver.tol = tol;
        so.solver.max_iter = max_iter;
        *out = new fpw_sweep{
            run_sweep(model->model, std::span<const double>(deltas, n), grid->grid, so)};
        return FPW_OK;
    });
}

void fpw_sweep_free(fpw_sweep* sweep) { delete sweep; }

size_t fpw_sweep_rows(const fpw_sweep* sweep) { return sweep ? sweep->report.rows.size() : 0; }

fpw_status fpw_sweep_row_get(const fpw_sweep* sweep, size_t i, fpw_sweep_row* out) {
    FPW_REQUIRE(sweep && out, "NULL argument");
    FPW_REQUIRE(i < sweep->report.rows.size(), "row index out of range");
    const auto& r = sweep->report.rows[i];
    fpw_sweep_row row{};
    row.delta = r.delta;
    row.ok = r.ok ? 1 : 0;
    row.lambda_sq = r.lambda_sq;
    row.a = r.a;
    row.b = r.b;
    row.sigma = r.sigma;
    row.residual = r.residual;
    row.iterations = r.iterations;
    row.speed_ratio = r.speed_ratio;
    row.b_coefficient = r.b_coefficient;
    row.a_coefficient = r.a_coefficient;
    fill_norms(r.errors.v_approx, row.err_v_approx);
    fill_norms(r.errors.r_approx, row.err_r_approx);
    fill_norms(r.errors.v_limit, row.err_v_limit);
    fill_norms(r.errors.r_limit, row.err_r_limit);
    *out = row;
    return FPW_OK;
}

fpw_status fpw_sweep_fit(const fpw_sweep* sweep, const char* name, double* slope,
                         double* stderr_slope) {
    FPW_REQUIRE(sweep && name && slope, "NULL argument");
    const auto it = sweep->report.fits.find(name);
    if (it == sweep->report.fits.end()) {
        return fail(FPW_ERR_INVALID_ARGUMENT, std::string("no fit named ") + name);
    }
    *slope = it->second.slope;
    if (stderr_slope) *stderr_slope = it->second.stderr_slope;
    return FPW_OK;
}

fpw_status fpw_sweep_json(const fpw_sweep* sweep, char** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(sweep && out, "NULL argument");
        *out = dup_string(to_json(sweep->report).dump());
        return FPW_OK;
    });
}

fpw_status fpw_approx_velocity(double delta, double x, double* out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        *out = approx_velocity(delta, x);
        return FPW_OK;
    });
}

fpw_status fpw_approx_distance(double delta, double x, double* out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        *out = approx_distance(delta, x);
        return FPW_OK;
    });
}

fpw_status fpw_limit_tip(double y, double out[3]) {
    FPW_REQUIRE(out, "out is NULL");
    const auto t = limit_tip(y);
    out[0] = t.value;
    out[1] = t.d1;
    out[2] = t.d2;
    return FPW_OK;
}

fpw_status fpw_limit_transition(double y, double* out) {
    FPW_REQUIRE(out, "out is NULL");
    *out = limit_transition(y);
    return FPW_OK;
}

fpw_status fpw_limit_foot(double y, double* out) {
    FPW_REQUIRE(out, "out is NULL");
    *out = limit_foot(y);
    return FPW_OK;
}

fpw_status fpw_predicted_scalars(double delta, double mu, double* log_lambda_sq, double* b,
                                 double* a) {
    return wrap_catch([&] {
        const auto p = predicted_scalars(delta, mu);
        if (log_lambda_sq) *log_lambda_sq = p.log_lambda_sq;
        if (b) *b = p.b;
        if (a) *a = p.a;
        return FPW_OK;
    });
}

fpw_status fpw_toda_exact(double beta, double x, double* velocity, double* distance,
                          double* speed) {
    return wrap_catch([&] {
        const auto w = toda_exact(beta, x);
        if (velocity) *velocity = w.velocity;
        if (distance) *distance = w.distance;
        if (speed) *speed = w.speed;
        return FPW_OK;
    });
}

fpw_status fpw_estimate_order(const double* deltas, const double* errors, size_t n,
                              double* slope, double* stderr_slope) {
    return wrap_catch([&] {
        FPW_REQUIRE(slope && (n == 0 || (deltas && errors)), "NULL argument");
        const auto fit = estimate_order(std::span<const double>(deltas, n),
                                        std::span<const double>(errors, n));
        *slope = fit.slope;
        if (stderr_slope) *stderr_slope = fit.stderr_slope;
        return FPW_OK;
    });
}

fpw_status fpw_config_new(const char* json_text, fpw_config** out) {
    return wrap_catch([&] {
        FPW_REQUIRE(out, "out is NULL");
        RunConfig cfg;
        if (json_text && *json_text) cfg = RunConfig::from_text(json_text);
        *out = new fpw_config{std::move(cfg)};
        return FPW_OK;
    });
}

void fpw_config_free(fpw_config* cfg) { delete cfg; }

fpw_status fpw_config_set_model(fpw_config* cfg, const char* spec) {
    return wrap_catch([&] {
        FPW_REQUIRE(cfg && spec, "NULL argument");
        cfg->cfg.model = ModelSpec::parse(spec);
        return FPW_OK;
    });
}

fpw_status fpw_config_set_delta(fpw_config* cfg, double delta) {
    FPW_REQUIRE(cfg, "config is NULL");
    cfg->cfg.deltas = {delta};
    return FPW_OK;
}

fpw_status fpw_config_set_L(fpw_config* cfg, int L) {
    FPW_REQUIRE(cfg, "config is NULL");
    cfg->cfg.L = L;
    return FPW_OK;
}

fpw_status fpw_config_set_k(fpw_config* cfg, int k) {
    FPW_REQUIRE(cfg, "config is NULL");
    cfg->cfg.k = k;
    return FPW_OK;
}

fpw_status fpw_config_set_tol(fpw_config* cfg, double tol) {
    FPW_REQUIRE(cfg, "config is NULL");
    cfg->cfg.tol = tol;
    return FPW_OK;
}

fpw_status fpw_config_set_output_dir(fpw_config* cfg, const char* dir) {
    FPW_REQUIRE(cfg && dir, "NULL argument");
    cfg->cfg.output_dir = dir;
    return FPW_OK;
}

fpw_status fpw_config_set_toda_only(fpw_config* cfg, int on) {
    FPW_REQUIRE(cfg, "config is NULL");
    cfg->cfg.toda_only = on != 0;
    return FPW_OK;
}

fpw_status fpw_run(fpw_command cmd, const fpw_config* cfg, char** report) {
    return wrap_catch([&] {
        FPW_REQUIRE(cfg, "config is NULL");
        if (report) *report = nullptr;
        CommandResult res;
        switch (cmd) {
        case FPW_CMD_SOLVE: res = cmd_solve(cfg->cfg); break;
        case FPW_CMD_SWEEP: res = cmd_sweep(cfg->cfg); break;
        case FPW_CMD_VERIFY: res = cmd_verify(cfg->cfg); break;
        case FPW_CMD_FIGURES_DATA: res = cmd_figures_data(cfg->cfg); break;
        default: return fail(FPW_ERR_INVALID_ARGUMENT, "unknown command");
        }
        const fpw_status st = res.outcome == Outcome::ok ? FPW_OK : FPW_ERR_NUMERICAL;
        if (report) {
            nlohmann::json j{{"status", fpw_status_string(st)},
                             {"lines", res.lines},
                             {"report", res.report}};
            *report = dup_string(j.dump());
        }
        if (st != FPW_OK) g_last_error = "numerical failure (see report)";
        return st;
    });
}

} // extern "C"
