#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "acceptance.hpp"
#include "analysis.hpp"
#include "asymptotics.hpp"
#include "io.hpp"

namespace fpuwave {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

PeriodicGrid make_grid(const RunConfig& cfg) {
    try {
        return PeriodicGrid::make(cfg.L, cfg.k);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions so;
    so.tol = cfg.tol;
    so.max_iter = cfg.max_iter;
    return so;
}

json base_report(const RunConfig& cfg, const char* command) {
    json j{{"command", command}, {"config", cfg.to_json()}};
    j["warnings"] = cfg.warnings;
    return j;
}

void write_scaled_set(const fs::path& dir, const WaveSolution& sol, const ForceModel& model,
                      const std::string& suffix) {
    write_scaled_csv(dir / ("tip" + suffix + ".csv"), tip_profile(sol, model));
    write_scaled_csv(dir / ("transition" + suffix + ".csv"), transition_profile(sol, model));
    write_scaled_csv(dir / ("foot" + suffix + ".csv"), foot_profile(sol, model));
}

// Coefficient of r^(mu-1) in Psi, which drives the next-order tip correction.
double subleading_coefficient(const ForceModel& model) {
    const int m = model.power_m();
    const auto& c = model.power_c();
    if (m < 2 || c.size() < static_cast<std::size_t>(m - 1)) return 0.0;
    return c[static_cast<std::size_t>(m - 2)];
}

} // namespace

std::vector<double> figure_deltas() { return {0.27, 0.09, 0.03}; }

CommandResult cmd_solve(RunConfig cfg) {
    cfg.normalise();
    cfg.require_model();
    if (cfg.deltas.size() != 1) throw ConfigError("solve needs exactly one delta");
    const ForceModel model = cfg.model->build();
    const PeriodicGrid grid = make_grid(cfg);
    const fs::path out = cfg.output_dir;
    const double delta = cfg.deltas.front();

    CommandResult res;
    res.report = base_report(cfg, "solve");
    std::optional<WaveSolution> sol;
    try {
        sol = solve_wave(model, delta, grid, solver_options(cfg));
        res.report["status"] = "converged";
    } catch (const NotConverged& e) {
        res.outcome = Outcome::numerical_failure;
        res.report["status"] = "not_converged";
        res.report["error"] = e.what();
        res.report["solution"] = to_json(e.last());
    } catch (const OverflowError& e) {
        res.outcome = Outcome::numerical_failure;
        res.report["status"] = "overflow";
        res.report["error"] = e.what();
    }

    if (sol) {
        res.report["solution"] = to_json(*sol);
        const auto pred = predicted_scalars(delta, model.mu());
        res.report["predicted"] = {
            {"log_lambda_sq", pred.log_lambda_sq}, {"b", pred.b}, {"a", pred.a}};
        json files = json::object();
        if (cfg.emit.profiles) {
            write_profile_csv(out / "V.csv", sol->V);
            write_profile_csv(out / "R.csv", sol->R);
            files["V"] = "V.csv";
            files["R"] = "R.csv";
        }
        if (cfg.emit.scaled) {
            write_scaled_set(out, *sol, model, "");
            for (const char* kind : {"tip", "transition", "foot"}) files[kind] = std::string(kind) + ".csv";
        }
        res.report["files"] = files;
        std::ostringstream os;
        os << "delta=" << format_number(delta) << " converged in " << sol->iterations
           << " iterations, residual " << sol->residual_inf << ", lambda^2 = " << sol->lambda_sq
           << ", a = " << sol->a << ", b = " << sol->b;
        res.lines.push_back(os.str());
    } else {
        res.lines.push_back("solve failed: " + res.report["error"].get<std::string>());
    }
    write_json(out / "solution.json", res.report);
    return res;
}

CommandResult cmd_sweep(RunConfig cfg) {
    if (cfg.deltas.empty()) cfg.deltas = default_sweep_deltas();
    cfg.normalise();
    cfg.require_model();
    const ForceModel model = cfg.model->build();
    const PeriodicGrid grid = make_grid(cfg);
    const fs::path out = cfg.output_dir;

    SweepOptions so;
    so.solver = solver_options(cfg);
    const auto report = run_sweep(model, cfg.deltas, grid, so);

    CommandResult res;
    res.report = base_report(cfg, "sweep");
    res.report["sweep"] = to_json(report);
    if (cfg.emit.sweep) {
        write_sweep_csv(out / "sweep.csv", report);
        write_json(out / "sweep.json", res.report);
    }
    std::size_t ok = 0;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        std::ostringstream os;
        os << "delta=" << format_number(row.delta) << ' ';
        if (!row.ok) {
            os << "FAILED: " << row.error;
            res.lines.push_back(os.str());
            continue;
        }
        ++ok;
        os << "iterations=" << row.iterations << " residual=" << row.residual
           << " speed_ratio=" << row.speed_ratio << " ||V-Vbar||_inf=" << row.errors.v_approx.linf;
        res.lines.push_back(os.str());
        const auto& sol = *report.solutions[i];
        const std::string tag = "_" + delta_tag(row.delta);
        if (cfg.emit.profiles) {
            write_profile_csv(out / "profiles" / ("V" + tag + ".csv"), sol.V);
            write_profile_csv(out / "profiles" / ("R" + tag + ".csv"), sol.R);
        }
        if (cfg.emit.scaled) write_scaled_set(out / "scaled", sol, model, tag);
    }
    for (const auto& [name, fit] : report.fits) {
        std::ostringstream os;
        os << "slope " << name << " = " << fit.slope << " +- " << fit.stderr_slope;
        res.lines.push_back(os.str());
    }
    if (ok == 0) res.outcome = Outcome::numerical_failure;
    return res;
}

CommandResult cmd_verify(RunConfig cfg) {
    cfg.normalise();
    (void)make_grid(cfg);
    AcceptanceOptions ao;
    ao.L = cfg.L;
    ao.k = cfg.k;
    ao.tol = cfg.tol;
    ao.max_iter = cfg.max_iter;
    ao.toda_only = cfg.toda_only;
    const auto results = run_acceptance(ao);

    CommandResult res;
    res.report = base_report(cfg, "verify");
    json criteria = json::array();
    for (const auto& r : results) {
        criteria.push_back(to_json(r));
        res.lines.push_back(format_line(r));
    }
    const bool ok = all_passed(results);
    res.report["criteria"] = criteria;
    res.report["all_passed"] = ok;
    res.outcome = ok ? Outcome::ok : Outcome::numerical_failure;
    write_json(fs::path(cfg.output_dir) / "verify.json", res.report);
    return res;
}

CommandResult cmd_figures_data(RunConfig cfg) {
    if (!cfg.model) cfg.model = ModelSpec{"power", 2, {2.0}};
    if (cfg.deltas.empty()) cfg.deltas = figure_deltas();
    cfg.normalise();
    const ForceModel model = cfg.model->build();
    const PeriodicGrid grid = make_grid(cfg);
    const fs::path out = cfg.output_dir;

    SweepOptions so;
    so.solver = solver_options(cfg);
    const auto report = run_sweep(model, cfg.deltas, grid, so);

    CommandResult res;
    res.report = base_report(cfg, "figures-data");
    json files = {{"fig1", json::array()},
                  {"fig2", json::array()},
                  {"fig3", json::array()},
                  {"fig4", json::array()}};
    const auto add = [&](const char* fig, const fs::path& rel) {
        files[fig].push_back(rel.generic_string());
    };

    const double c1 = 0.5, c2 = 2.0;
    double y_max = 0.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        if (!row.ok) {
            res.lines.push_back("delta=" + format_number(row.delta) + " FAILED: " + row.error);
            continue;
        }
        ++ok;
        const auto& sol = *report.solutions[i];
        const std::string tag = delta_tag(row.delta);
        const auto x = grid.nodes();
        const Profile vbar = approx_velocity_profile(grid, row.delta);
        const Profile rbar = approx_distance_profile(grid, row.delta);

        const fs::path f1 = fs::path("fig1") / ("profiles_" + tag + ".csv");
        write_csv(out / f1, {{"x", x},
                             {"V", sol.V.values()},
                             {"Vbar", vbar.values()},
                             {"R", sol.R.values()},
                             {"Rbar", rbar.values()}});
        add("fig1", f1);

        const auto tip = tip_profile(sol, model);
        const auto tr = transition_profile(sol, model);
        const auto ft = foot_profile(sol, model);
        const std::pair<const char*, const ScaledProfile*> scaled[] = {
            {"tip", &tip}, {"transition", &tr}, {"foot", &ft}};
        for (const auto& [name, p] : scaled) {
            const fs::path f = fs::path("fig2") / (std::string(name) + "_" + tag + ".csv");
            write_scaled_csv(out / f, *p);
            add("fig2", f);
        }
        std::vector<double> s0, w0, t0;
        for (double y : tip.y) {
            s0.push_back(limit_tip(y).value);
            w0.push_back(limit_transition(y));
            t0.push_back(limit_foot(y));
        }
        const fs::path f2 = fs::path("fig2") / ("limits_" + tag + ".csv");
        write_csv(out / f2, {{"y", tip.y}, {"S0", s0}, {"W0", w0}, {"T0", t0}});
        add("fig2", f2);
        y_max = std::max(y_max, tip.y_star);

        const auto e = scaled_error_curve(sol, model);
        const fs::path f3 = fs::path("fig3") / ("Edelta_" + tag + ".csv");
        write_csv(out / f3, {{"y", e.y}, {"E0", e.e0}, {"E1", e.e1}, {"E2", e.e2}});
        add("fig3", f3);

        std::vector<double> dv(x.size()), dr(x.size()), sv(x.size()), sr(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            dv[j] = sol.V[j] - vbar[j];
            dr[j] = sol.R[j] - rbar[j];
            sv[j] = c1 * dv[j] / row.delta;
            sr[j] = c2 * dr[j] / (row.delta * row.delta);
        }
        const fs::path f4 = fs::path("fig4") / ("errors_" + tag + ".csv");
        write_csv(out / f4, {{"x", x},
                             {"V_err", dv},
                             {"R_err", dr},
                             {"V_err_scaled", sv},
                             {"R_err_scaled", sr}});
        add("fig4", f4);
        res.lines.push_back("delta=" + tag + " written");
    }

    if (ok > 0) {
        const double c = subleading_coefficient(model);
        const auto s1 = integrate_s1_ode(model.mu(), c, std::ceil(y_max), 1e-3);
        // S1 is even; mirror the half-line solution.
        std::vector<double> y, v, d;
        for (std::size_t j = s1.y.size() - 1; j > 0; --j) {
            y.push_back(-s1.y[j]);
            v.push_back(s1.values[j]);
            d.push_back(-s1.derivs[j]);
        }
        y.insert(y.end(), s1.y.begin(), s1.y.end());
        v.insert(v.end(), s1.values.begin(), s1.values.end());
        d.insert(d.end(), s1.derivs.begin(), s1.derivs.end());
        const fs::path f = fs::path("fig3") / "S1.csv";
        write_csv(out / f, {{"y", y}, {"S1", v}, {"S1_prime", d}});
        add("fig3", f);
        if (model.name() == "toda") {
            res.report["warnings"].push_back("Toda tip corrections are exponentially small; S1 is 0");
        }
    }

    res.report["files"] = files;
    res.report["columns"] = {
        {"fig1/profiles_<delta>.csv", {"x", "V", "Vbar", "R", "Rbar"}},
        {"fig2/<tip|transition|foot>_<delta>.csv", {"y", "value", "d1", "d2"}},
        {"fig2/limits_<delta>.csv", {"y", "S0", "W0", "T0"}},
        {"fig3/Edelta_<delta>.csv", {"y", "E0", "E1", "E2"}},
        {"fig3/S1.csv", {"y", "S1", "S1_prime"}},
        {"fig4/errors_<delta>.csv", {"x", "V_err", "R_err", "V_err_scaled", "R_err_scaled"}}};
    res.report["prefactors"] = {{"c1", c1}, {"c2", c2}};
    res.report["sweep"] = to_json(report);
    write_json(out / "manifest.json", res.report);
    if (ok == 0) res.outcome = Outcome::numerical_failure;
    return res;
}

} // namespace fpuwave
