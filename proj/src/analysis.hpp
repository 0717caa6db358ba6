#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "solver.hpp"

namespace fpuwave {

enum class ScaledKind { tip, transition, foot };

const char* to_string(ScaledKind kind);

/// Default number of samples on I = [-y*, y*]; odd so that y = 0 is a sample.
inline constexpr std::size_t kScaledSamples = 2049;

/// A wave profile seen through one of the local scalings x = x0 + b y,
/// sampled on I = [-y*, y*] with y* = 1/(2b).
struct ScaledProfile {
    ScaledKind kind;
    double delta = 0.0;
    double b = 0.0;
    double y_star = 0.0;
    std::vector<double> y;
    std::vector<double> values;
    std::vector<double> d1;
    /// Empty for the transition scaling.
    std::vector<double> d2;
};

/// S(y) = 1/a - R(b y)/delta with S' and S'' from the traveling-wave
/// identities rather than numerical differentiation.
ScaledProfile tip_profile(const WaveSolution& sol, const ForceModel& model,
                          std::size_t samples = kScaledSamples);
/// W(y) = (b/delta) V(-1/2 + b y), with W'.
ScaledProfile transition_profile(const WaveSolution& sol, const ForceModel& model,
                                 std::size_t samples = kScaledSamples);
/// T(y) = R(-1 + b y)/delta, with T' and T''.
ScaledProfile foot_profile(const WaveSolution& sol, const ForceModel& model,
                           std::size_t samples = kScaledSamples);

/// The delta -> 0 limit of a scaled profile at y: (value, d1, d2).
TipLimit scaled_limit(ScaledKind kind, double y);

/// E(y) = (S(y) - S0(y)) / delta and the analogous first/second derivative errors.
struct ScaledErrorCurve {
    double delta = 0.0;
    std::vector<double> y;
    std::vector<double> e0;
    std::vector<double> e1;
    std::vector<double> e2;
};

ScaledErrorCurve scaled_error_curve(const WaveSolution& sol, const ForceModel& model,
                                    std::size_t samples = kScaledSamples);

/// sup over I of |profile - limit| / delta for value, d1, d2 (NaN if absent).
struct ScaledSupErrors {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

ScaledSupErrors scaled_sup_errors(const ScaledProfile& p);

struct NormTriple {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

struct ProfileErrors {
    NormTriple v_approx;  ///< ||V - Vbar||
    NormTriple r_approx;  ///< ||R - Rbar||
    NormTriple v_limit;   ///< ||V - V0||
    NormTriple r_limit;   ///< ||R - R0||
};

/// Approximation and limit profiles sampled on a grid.
Profile approx_velocity_profile(const PeriodicGrid& grid, double delta);
Profile approx_distance_profile(const PeriodicGrid& grid, double delta);

ProfileErrors profile_errors(const WaveSolution& sol);

struct OrderFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

/// Least-squares slope of log(error) against log(delta).
/// Throws InvalidArgument for fewer than 3 pairs or nonpositive inputs.
OrderFit estimate_order(std::span<const double> deltas, std::span<const double> errors);

struct SweepRow {
    double delta = 0.0;
    bool ok = false;
    std::string error;

    double lambda_sq = 0.0;
    double log_lambda_sq = 0.0;
    double a = 0.0;
    double b = 0.0;
    double sigma = 0.0;
    double energy = 0.0;
    double log_energy = 0.0;
    long iterations = 0;
    double residual = 0.0;
    double max_energy_drop = 0.0;
    double norm_deviation = 0.0; ///< | ||V||_2 - 1 |

    ProfileErrors errors;
    PredictedScalars predicted{};
    double speed_ratio = 0.0;  ///< lambda^2 delta^mu exp(-1/delta), -> e
    double b_coefficient = 0.0; ///< (b - (2 delta - 2 delta^2)) / delta^3
    double a_coefficient = 0.0; ///< (a - delta) / delta^2, -> 2 ln 2 - 1

    ScaledSupErrors tip;
    ScaledSupErrors transition;
    ScaledSupErrors foot;
};

struct SweepOptions {
    SolverOptions solver;
    /// Start each delta from the previous converged profile.
    bool warm_start = true;
    std::size_t scaled_samples = kScaledSamples;
};

struct SweepReport {
    std::string model;
    double mu = 0.0;
    PeriodicGrid grid;
    std::vector<SweepRow> rows;
    std::vector<std::optional<WaveSolution>> solutions;
    std::map<std::string, OrderFit> fits;
};

/// Solves for each delta (strictly descending, in (0, 0.5]) and collects
/// errors, scalar diagnostics and fitted orders. Solver failures are recorded
/// per row and the sweep continues.
SweepReport run_sweep(const ForceModel& model, std::span<const double> deltas,
                      const PeriodicGrid& grid, const SweepOptions& opts = {});

/// Names and targets of the fitted orders stored in SweepReport::fits.
struct FitSpec {
    const char* name;
    double target;
};
std::span<const FitSpec> sweep_fit_specs();

/// Fit quantity by name for one row (see sweep_fit_specs()).
double fit_quantity(const SweepRow& row, const std::string& name);

} // namespace fpuwave
