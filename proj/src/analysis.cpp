#include "analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace fpuwave {

namespace {

constexpr std::array<FitSpec, 5> kFits{{
    {"R_approx_inf", 2.0},
    {"R_approx_1", 2.0},
    {"V_approx_inf", 1.0},
    {"V_approx_1", 2.0},
    {"V_limit_1", 1.0},
}};

void require_converged(const WaveSolution& sol) {
    if (!sol.converged) throw InvalidArgument("scaled profiles need a converged solution");
    if (!(sol.b > 0.0) || !(sol.a > 0.0)) throw InvalidArgument("solution has no valid scalars");
}

std::vector<double> y_samples(double y_star, std::size_t n) {
    if (n < 2) throw InvalidArgument("need at least two scaled samples");
    std::vector<double> y(n);
    const double step = 2.0 * y_star / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) y[j] = -y_star + static_cast<double>(j) * step;
    if (n % 2 == 1) y[n / 2] = 0.0;
    return y;
}

// a^mu exp(-1/a) Phi'(R(x)/delta), evaluated in log space.
struct ScaledForce {
    const WaveSolution& sol;
    const ForceModel& model;
    double log_prefactor;

    ScaledForce(const WaveSolution& s, const ForceModel& m)
        : sol(s), model(m), log_prefactor(m.mu() * std::log(s.a) - 1.0 / s.a) {}

    double operator()(double x) const {
        const double r = std::max(interpolate(sol.R, x), 0.0) / sol.delta;
        if (r == 0.0) return 0.0;
        return std::exp(log_prefactor + model.log_force(r));
    }
};

ScaledProfile start(ScaledKind kind, const WaveSolution& sol, std::size_t samples) {
    require_converged(sol);
    ScaledProfile p{.kind = kind,
                    .delta = sol.delta,
                    .b = sol.b,
                    .y_star = 0.5 / sol.b,
                    .y = y_samples(0.5 / sol.b, samples),
                    .values = {},
                    .d1 = {},
                    .d2 = {}};
    p.values.reserve(samples);
    p.d1.reserve(samples);
    return p;
}

Profile sampled(const PeriodicGrid& grid, double delta, double (*f)(double, double)) {
    return Profile::sample(grid, [=](double x) { return f(delta, x); });
}

NormTriple norms(const Profile& d) {
    return {lp_norm(d, 1.0), lp_norm(d, 2.0),
            lp_norm(d, std::numeric_limits<double>::infinity())};
}

} // namespace

const char* to_string(ScaledKind kind) {
    switch (kind) {
    case ScaledKind::tip: return "tip";
    case ScaledKind::transition: return "transition";
    case ScaledKind::foot: return "foot";
    }
    return "unknown";
}

ScaledProfile tip_profile(const WaveSolution& sol, const ForceModel& model, std::size_t samples) {
    auto p = start(ScaledKind::tip, sol, samples);
    p.d2.reserve(samples);
    const ScaledForce f(sol, model);
    const double q = sol.b / sol.delta;
    for (double y : p.y) {
        const double x = sol.b * y;
        p.values.push_back(1.0 / sol.a - interpolate(sol.R, x) / sol.delta);
        p.d1.push_back(-q * (interpolate(sol.V, x + 0.5) - interpolate(sol.V, x - 0.5)));
        p.d2.push_back(2.0 * f(x) - f(x - 1.0) - f(x + 1.0));
    }
    return p;
}

ScaledProfile transition_profile(const WaveSolution& sol, const ForceModel& model,
                                 std::size_t samples) {
    auto p = start(ScaledKind::transition, sol, samples);
    const ScaledForce f(sol, model);
    const double q = sol.b / sol.delta;
    for (double y : p.y) {
        const double x = -0.5 + sol.b * y;
        p.values.push_back(q * interpolate(sol.V, x));
        p.d1.push_back(f(x + 0.5) - f(x - 0.5));
    }
    return p;
}

ScaledProfile foot_profile(const WaveSolution& sol, const ForceModel& model, std::size_t samples) {
    auto p = start(ScaledKind::foot, sol, samples);
    p.d2.reserve(samples);
    const ScaledForce f(sol, model);
    const double q = sol.b / sol.delta;
    for (double y : p.y) {
        const double x = -1.0 + sol.b * y;
        p.values.push_back(interpolate(sol.R, x) / sol.delta);
        p.d1.push_back(q * (interpolate(sol.V, x + 0.5) - interpolate(sol.V, x - 0.5)));
        p.d2.push_back(f(x + 1.0) + f(x - 1.0) - 2.0 * f(x));
    }
    return p;
}

TipLimit scaled_limit(ScaledKind kind, double y) {
    switch (kind) {
    case ScaledKind::tip: return limit_tip(y);
    case ScaledKind::transition: {
        const double t = std::tanh(y);
        return {1.0 + t, 1.0 - t * t, -2.0 * t * (1.0 - t * t)};
    }
    case ScaledKind::foot: {
        // T0 = log1p(e^{2y}), T0' = 1 + tanh y, T0'' = sech^2 y
        const double t = std::tanh(y);
        return {limit_foot(y), 1.0 + t, 1.0 - t * t};
    }
    }
    throw InvalidArgument("unknown scaled profile kind");
}

ScaledErrorCurve scaled_error_curve(const WaveSolution& sol, const ForceModel& model,
                                    std::size_t samples) {
    const auto p = tip_profile(sol, model, samples);
    ScaledErrorCurve c{.delta = sol.delta, .y = p.y, .e0 = {}, .e1 = {}, .e2 = {}};
    c.e0.reserve(samples);
    c.e1.reserve(samples);
    c.e2.reserve(samples);
    for (std::size_t j = 0; j < p.y.size(); ++j) {
        const auto lim = limit_tip(p.y[j]);
        c.e0.push_back((p.values[j] - lim.value) / sol.delta);
        c.e1.push_back((p.d1[j] - lim.d1) / sol.delta);
        c.e2.push_back((p.d2[j] - lim.d2) / sol.delta);
    }
    return c;
}

ScaledSupErrors scaled_sup_errors(const ScaledProfile& p) {
    ScaledSupErrors e{0.0, 0.0, p.d2.empty() ? std::numeric_limits<double>::quiet_NaN() : 0.0};
    for (std::size_t j = 0; j < p.y.size(); ++j) {
        const auto lim = scaled_limit(p.kind, p.y[j]);
        e.value = std::max(e.value, std::abs(p.values[j] - lim.value));
        e.d1 = std::max(e.d1, std::abs(p.d1[j] - lim.d1));
        if (!p.d2.empty()) e.d2 = std::max(e.d2, std::abs(p.d2[j] - lim.d2));
    }
    e.value /= p.delta;
    e.d1 /= p.delta;
    e.d2 /= p.delta;
    return e;
}

Profile approx_velocity_profile(const PeriodicGrid& grid, double delta) {
    return sampled(grid, delta, approx_velocity);
}

Profile approx_distance_profile(const PeriodicGrid& grid, double delta) {
    return sampled(grid, delta, approx_distance);
}

ProfileErrors profile_errors(const WaveSolution& sol) {
    const auto& g = sol.grid;
    return {norms(sol.V - approx_velocity_profile(g, sol.delta)),
            norms(sol.R - approx_distance_profile(g, sol.delta)),
            norms(sol.V - indicator_profile(g)),
            norms(sol.R - tent_profile(g))};
}

OrderFit estimate_order(std::span<const double> deltas, std::span<const double> errors) {
    if (deltas.size() != errors.size()) {
        throw InvalidArgument("estimate_order: deltas and errors differ in length");
    }
    const std::size_t n = deltas.size();
    if (n < 3) throw InvalidArgument("estimate_order needs at least 3 points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(deltas[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) {
            throw InvalidArgument("estimate_order needs positive finite deltas and errors");
        }
        lx[i] = std::log(deltas[i]);
        ly[i] = std::log(errors[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidArgument("estimate_order needs distinct deltas");
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = n;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += r * r;
    }
    fit.stderr_slope = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

std::span<const FitSpec> sweep_fit_specs() { return kFits; }

double fit_quantity(const SweepRow& row, const std::string& name) {
    if (name == "R_approx_inf") return row.errors.r_approx.linf;
    if (name == "R_approx_1") return row.errors.r_approx.l1;
    if (name == "V_approx_inf") return row.errors.v_approx.linf;
    if (name == "V_approx_1") return row.errors.v_approx.l1;
    if (name == "V_limit_1") return row.errors.v_limit.l1;
    throw InvalidArgument("unknown fit quantity: " + name);
}

SweepReport run_sweep(const ForceModel& model, std::span<const double> deltas,
                      const PeriodicGrid& grid, const SweepOptions& opts) {
    if (deltas.empty()) throw InvalidArgument("sweep needs at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0 && deltas[i] <= 0.5)) {
            std::ostringstream os;
            os << "delta must lie in (0, 0.5], got " << deltas[i];
            throw InvalidArgument(os.str());
        }
        if (i > 0 && !(deltas[i] < deltas[i - 1])) {
            throw InvalidArgument("sweep deltas must be strictly descending");
        }
    }
    opts.solver.validate();

    SweepReport report{.model = model.name(),
                       .mu = model.mu(),
                       .grid = grid,
                       .rows = {},
                       .solutions = {},
                       .fits = {}};
    std::optional<Profile> previous;
    for (double delta : deltas) {
        SweepRow row;
        row.delta = delta;
        row.predicted = predicted_scalars(delta, model.mu());
        SolverOptions so = opts.solver;
        if (opts.warm_start && previous) {
            so.initial_guess = InitialGuess::previous_solution;
            so.initial_profile = previous;
        }
        std::optional<WaveSolution> sol;
        try {
            sol = solve_wave(model, delta, grid, so);
        } catch (const NotConverged& e) {
            row.error = e.what();
            const auto& last = e.last();
            row.iterations = last.iterations;
            row.residual = last.residual_inf;
        } catch (const Error& e) {
            row.error = e.what();
        }

        if (sol) {
            try {
                row.lambda_sq = sol->lambda_sq;
                row.log_lambda_sq = sol->log_lambda_sq;
                row.a = sol->a;
                row.b = sol->b;
                row.sigma = sol->sigma;
                row.energy = sol->energy;
                row.log_energy = sol->log_energy;
                row.iterations = sol->iterations;
                row.residual = sol->residual_inf;
                row.max_energy_drop = sol->max_relative_energy_drop;
                row.norm_deviation = std::abs(lp_norm(sol->V, 2.0) - 1.0);
                row.errors = profile_errors(*sol);
                row.speed_ratio = std::exp(sol->log_lambda_sq + model.mu() * std::log(delta) -
                                           1.0 / delta);
                row.b_coefficient = (sol->b - row.predicted.b) / (delta * delta * delta);
                row.a_coefficient = (sol->a - delta) / (delta * delta);
                row.tip = scaled_sup_errors(tip_profile(*sol, model, opts.scaled_samples));
                row.transition =
                    scaled_sup_errors(transition_profile(*sol, model, opts.scaled_samples));
                row.foot = scaled_sup_errors(foot_profile(*sol, model, opts.scaled_samples));
                row.ok = true;
                previous = sol->V;
            } catch (const Error& e) {
                row.error = e.what();
            }
        }
        report.rows.push_back(std::move(row));
        report.solutions.push_back(std::move(sol));
    }

    for (const auto& spec : kFits) {
        std::vector<double> ds, es;
        for (const auto& row : report.rows) {
            if (!row.ok) continue;
            const double e = fit_quantity(row, spec.name);
            if (e > 0.0 && std::isfinite(e)) {
                ds.push_back(row.delta);
                es.push_back(e);
            }
        }
        if (ds.size() >= 3) report.fits[spec.name] = estimate_order(ds, es);
    }
    return report;
}

} // namespace fpuwave
