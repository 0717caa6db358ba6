#include <cmath>
#include <vector>

#include <doctest.h>

#include "analysis.hpp"
#include "asymptotics.hpp"
#include "oracles.hpp"
#include "solver.hpp"

using namespace fpuwave;

namespace {

const auto grid64 = PeriodicGrid::make(3, 64);

} // namespace

TEST_CASE("gradient map agrees with direct evaluation") {
    const auto m = power_family(2, {2.0});
    const double d = 0.27;
    const auto v0 = indicator_profile(grid64);
    const auto g = gradient_map(m, d, v0);
    CHECK(std::isfinite(g.norm()));
    CHECK(g.norm() > 0.0);

    const std::vector<double> vv(v0.values().begin(), v0.values().end());
    const auto r = oracle::window_average(vv, 64);
    std::vector<double> f(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double s = r[i] / d;
        f[i] = (s * s + 2 * s) * std::exp(s);
    }
    const auto af = oracle::window_average(f, 64);
    double ss = 0.0;
    for (double x : af) ss += x * x / (d * d);
    const double norm = std::sqrt(ss * grid64.spacing());
    CHECK(g.norm() == doctest::Approx(norm).epsilon(1e-12));
    const double scale = std::exp(g.log_scale);
    for (std::size_t i = 0; i < af.size(); i += 17) {
        CHECK(g.direction[i] * scale == doctest::Approx(af[i] / d).epsilon(1e-12));
    }
    CHECK(in_cone(g.direction, 1e-12));
}

TEST_CASE("improvement step") {
    const auto m = power_family(2, {2.0});
    const auto v0 = indicator_profile(grid64);
    const auto v1 = improvement_step(m, 0.27, v0);
    CHECK(lp_norm(v1, 2) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(energy(m, 0.27, v1) > energy(m, 0.27, v0));
    CHECK(in_cone(improvement_step(toda(), 0.4, v0), 1e-12));
}

TEST_CASE("converged power-law wave") {
    const auto m = power_family(2, {2.0});
    const double d = 0.27;
    const auto sol = solve_wave(m, d, grid64);
    CHECK(sol.converged);
    CHECK(residual(m, sol) <= 1e-10);
    CHECK(residual(m, sol) == residual(m, sol));
    CHECK(sol.residual_inf == residual(m, sol));
    CHECK(std::abs(lp_norm(sol.V, 2) - 1) <= 1e-12);
    CHECK(sup_distance(sol.R, average(sol.V)) == 0.0);
    CHECK(sol.r_peak > 0.75);
    CHECK(sol.r_peak < 1.25);
    CHECK(sol.r_peak == interpolate(sol.R, 0.0));
    CHECK(sol.r_peak >= lp_norm(sol.R, INFINITY));
    CHECK(sol.lambda_sq > 0.0);
    CHECK(sol.lambda_sq == doctest::Approx(gradient_map(m, d, sol.V).norm()).epsilon(1e-10));
    CHECK(sol.sigma == doctest::Approx(std::sqrt(sol.lambda_sq) * d));
    CHECK(sol.a == doctest::Approx(d / sol.r_peak));
    const double b = std::sqrt(d * d * sol.a * sol.a * sol.lambda_sq * std::exp(-1 / sol.a));
    CHECK(sol.b == doctest::Approx(b).epsilon(1e-12));
    CHECK(sol.b >= 0.1 * d);
    CHECK(sol.b <= 10 * std::sqrt(d));
    CHECK(in_cone(sol.V, 1e-12));
    CHECK(in_cone(sol.R, 1e-12));

    for (std::size_t i = 1; i < sol.log_energy_trace.size(); ++i) {
        const double drop = -std::expm1(sol.log_energy_trace[i] - sol.log_energy_trace[i - 1]);
        CHECK(drop <= 1e-13);
    }
    CHECK(sol.max_relative_energy_drop <= 1e-13);

    // one more step is a no-op
    CHECK(sup_distance(improvement_step(m, d, sol.V), sol.V) <= 2e-12);

    // the initial guess is not a solution
    WaveSolution bad = sol;
    bad.V = indicator_profile(grid64);
    bad.R = average(bad.V);
    fill_scalars(m, bad);
    CHECK(residual(m, bad) > 1e-2);
}

TEST_CASE("Toda chain: periodic solver reproduces the solitary wave") {
    // -V_toda, normalised, solves the normalised problem with
    // delta = sigma / ||V_toda||_2 and lambda^2 = ||V_toda||_2^2.
    const double beta = 0.36;
    const auto g = PeriodicGrid::make(3, 128);
    const double n2 = oracle::simpson([&](double x) { return std::pow(toda_exact(beta, x).velocity, 2); },
                                      -3.0, 3.0, 60000);
    const double n = std::sqrt(n2);
    const double d = toda_exact(beta, 0.0).speed / n;
    REQUIRE(d > 0.05);
    REQUIRE(d < 0.5);
    const auto sol = solve_wave(toda(), d, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(sol.V[i] + toda_exact(beta, g.node(i)).velocity / n));
    }
    CHECK(worst <= 1e-4 * (1 / n) * 10);
    CHECK(sol.lambda_sq == doctest::Approx(n2).epsilon(1e-4));
}

TEST_CASE("grid refinement changes lambda^2 at second order") {
    const auto m = power_family(2, {2.0});
    std::vector<double> lam;
    for (int k : {32, 64, 128}) lam.push_back(solve_wave(m, 0.27, PeriodicGrid::make(3, k)).lambda_sq);
    const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("Toda wave near the approximation") {
    const auto sol = solve_wave(toda(), 0.09, grid64);
    CHECK(sup_distance(sol.V, approx_velocity_profile(grid64, 0.09)) <= 0.5);
}

TEST_CASE("energy functional") {
    const auto t = toda();
    CHECK(energy(t, 0.3, Profile::constant(grid64, 0.0)) == 0.0);
    CHECK(std::isinf(log_energy(t, 0.3, Profile::constant(grid64, 0.0))));
    // tent pushforward: 2 * int_0^1 Phi(r / delta) dr = e^2 - 5 at delta = 1/2
    const auto fine = PeriodicGrid::make(3, 512);
    const double e2 = std::exp(2.0);
    CHECK(energy(t, 0.5, indicator_profile(fine)) == doctest::Approx(e2 - 5).epsilon(1e-5));

    const auto m = power_family(2, {2.0});
    const auto v = solve_wave(m, 0.18, grid64).V;
    double prev = -1.0;
    for (double s = 0.0; s <= 1.0; s += 0.125) {
        const double p = energy(m, 0.18, s * v);
        CHECK(p > prev);
        prev = p;
    }
    CHECK(std::isinf(energy(m, 0.001, indicator_profile(grid64))));
    CHECK(std::isfinite(log_energy(m, 0.001, indicator_profile(grid64))));
}

TEST_CASE("solver preconditions and failures") {
    const auto m = toda();
    CHECK_THROWS_AS(solve_wave(m, 0.6, grid64), InvalidArgument);
    CHECK_THROWS_AS(solve_wave(m, 0.0, grid64), InvalidArgument);
    SolverOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve_wave(m, 0.2, grid64, bad), InvalidArgument);

    SolverOptions few;
    few.max_iter = 2;
    try {
        solve_wave(m, 0.1, grid64, few);
        FAIL("expected NotConverged");
    } catch (const NotConverged& e) {
        CHECK(e.last().iterations == 2);
        CHECK_FALSE(e.last().converged);
        CHECK(e.last().last_update > few.tol);
        CHECK(std::abs(lp_norm(e.last().V, 2) - 1) <= 1e-12);
    }
}

TEST_CASE("warm start reaches the same fixed point") {
    const auto m = power_family(2, {2.0});
    const auto cold = solve_wave(m, 0.12, grid64);
    SolverOptions warm;
    warm.initial_guess = InitialGuess::previous_solution;
    warm.initial_profile = solve_wave(m, 0.18, grid64).V;
    const auto hot = solve_wave(m, 0.12, grid64, warm);
    CHECK(sup_distance(hot.V, cold.V) <= 1e-10);
}
