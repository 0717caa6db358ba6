#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fpuwave {

namespace {

constexpr double kLogMax = 709.782712893384; // log(DBL_MAX)

void require_delta(double delta) {
    if (!(delta > 0.0)) {
        std::ostringstream os;
        os << "delta must be positive, got " << delta;
        throw InvalidArgument(os.str());
    }
}

double checked_exp(double log_value, const char* what) {
    if (log_value > kLogMax) {
        std::ostringstream os;
        os << what << " exceeds the double range (log = " << log_value
           << "); delta is too small";
        throw OverflowError(os.str());
    }
    return std::exp(log_value);
}

Profile normalised(Profile v) {
    const double n = lp_norm(v, 2.0);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidArgument("initial profile must have finite nonzero L2 norm");
    }
    v *= 1.0 / n;
    return v;
}

} // namespace

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (initial_guess != InitialGuess::indicator && !initial_profile) {
        throw InvalidArgument("initial guess requires an initial profile");
    }
}

double GradientResult::log_norm() const { return log_scale + std::log(direction_norm); }

double GradientResult::norm() const { return checked_exp(log_norm(), "||G(V)||_2"); }

GradientResult gradient_map(const ForceModel& model, double delta, const Profile& v) {
    require_delta(delta);
    const Profile r = average(v);
    const auto& grid = v.grid();

    std::vector<double> log_force(grid.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < log_force.size(); ++i) {
        log_force[i] = model.log_force(std::max(r[i], 0.0) / delta);
        peak = std::max(peak, log_force[i]);
    }
    if (!std::isfinite(peak)) {
        throw InvalidArgument("energy gradient vanishes: profile has no positive mass");
    }

    std::vector<double> scaled(grid.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = std::exp(log_force[i] - peak);

    GradientResult out{average(Profile(grid, std::move(scaled))), peak - std::log(delta), 0.0};
    out.direction_norm = lp_norm(out.direction, 2.0);
    return out;
}

Profile improvement_step(const ForceModel& model, double delta, const Profile& v) {
    auto g = gradient_map(model, delta, v);
    g.direction *= 1.0 / g.direction_norm;
    return std::move(g.direction);
}

double log_energy(const ForceModel& model, double delta, const Profile& v) {
    require_delta(delta);
    const Profile r = average(v);
    std::vector<double> lp(r.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lp.size(); ++i) {
        lp[i] = model.log_potential(std::max(r[i], 0.0) / delta);
        peak = std::max(peak, lp[i]);
    }
    if (!std::isfinite(peak)) return peak;
    long double s = 0.0L;
    for (double x : lp) s += std::exp(x - peak);
    return peak + std::log(v.grid().spacing() * static_cast<double>(s));
}

double energy(const ForceModel& model, double delta, const Profile& v) {
    const double lp = log_energy(model, delta, v);
    if (lp > kLogMax) return std::numeric_limits<double>::infinity();
    return std::exp(lp);
}

void fill_scalars(const ForceModel& model, WaveSolution& sol) {
    const auto g = gradient_map(model, sol.delta, sol.V);
    sol.log_lambda_sq = g.log_norm();
    sol.lambda_sq = checked_exp(sol.log_lambda_sq, "lambda^2");
    sol.sigma = sol.delta * std::exp(0.5 * sol.log_lambda_sq);
    sol.r_peak = interpolate(sol.R, 0.0);
    sol.a = sol.delta / sol.r_peak;
    const double log_b =
        std::log(sol.delta) + 0.5 * (model.mu() * std::log(sol.a) + sol.log_lambda_sq - 1.0 / sol.a);
    sol.b = std::exp(log_b);
}

double residual(const ForceModel& model, const WaveSolution& sol) {
    const auto g = gradient_map(model, sol.delta, sol.V);
    const double factor = std::exp(g.log_scale - sol.log_lambda_sq);
    double m = 0.0;
    for (std::size_t i = 0; i < sol.V.size(); ++i) {
        m = std::max(m, std::abs(sol.V[i] - factor * g.direction[i]));
    }
    return m;
}

WaveSolution solve_wave(const ForceModel& model, double delta, const PeriodicGrid& grid,
                        const SolverOptions& opts) {
    if (!(delta > 0.0 && delta <= 0.5)) {
        std::ostringstream os;
        os << "delta must lie in (0, 0.5], got " << delta;
        throw InvalidArgument(os.str());
    }
    opts.validate();

    Profile v = indicator_profile(grid);
    if (opts.initial_guess != InitialGuess::indicator) {
        if (!(opts.initial_profile->grid() == grid)) {
            throw InvalidArgument("initial profile lives on a different grid");
        }
        v = normalised(*opts.initial_profile);
    }

    std::vector<double> trace;
    double max_drop = 0.0;
    if (opts.track_energy) trace.push_back(log_energy(model, delta, v));

    long it = 0;
    double update = std::numeric_limits<double>::infinity();
    while (it < opts.max_iter) {
        Profile next = improvement_step(model, delta, v);
        if (opts.cone_projection_each_step) next = normalised(enforce_cone(next));
        update = sup_distance(next, v);
        v = std::move(next);
        ++it;
        if (opts.track_energy) {
            const double le = log_energy(model, delta, v);
            max_drop = std::max(max_drop, -std::expm1(le - trace.back()));
            trace.push_back(le);
        }
        if (update < opts.tol) break;
    }

    Profile r = average(v);
    WaveSolution sol{.delta = delta,
                     .grid = grid,
                     .V = std::move(v),
                     .R = std::move(r),
                     .lambda_sq = 0.0,
                     .log_lambda_sq = 0.0,
                     .sigma = 0.0,
                     .r_peak = 0.0,
                     .a = 0.0,
                     .b = 0.0,
                     .iterations = it,
                     .last_update = update,
                     .residual_inf = 0.0,
                     .energy = 0.0,
                     .log_energy = 0.0,
                     .converged = update < opts.tol,
                     .log_energy_trace = std::move(trace),
                     .max_relative_energy_drop = max_drop};
    fill_scalars(model, sol);
    sol.residual_inf = residual(model, sol);
    sol.log_energy = log_energy(model, delta, sol.V);
    sol.energy = sol.log_energy > kLogMax ? std::numeric_limits<double>::infinity()
                                          : std::exp(sol.log_energy);

    if (!sol.converged) {
        std::ostringstream os;
        os << "fixed-point iteration did not converge for delta = " << delta << " within "
           << opts.max_iter << " iterations (last update " << update << ")";
        throw NotConverged(os.str(), std::make_shared<WaveSolution>(std::move(sol)));
    }
    return sol;
}

} // namespace fpuwave
