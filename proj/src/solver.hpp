#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "potentials.hpp"

namespace fpuwave {

enum class InitialGuess { indicator, previous_solution, custom };

struct SolverOptions {
    /// Stop once the sup-norm of the update drops below this.
    double tol = 1e-12;
    long max_iter = 200000;
    bool cone_projection_each_step = true;
    InitialGuess initial_guess = InitialGuess::indicator;
    /// Used with InitialGuess::previous_solution / custom. Must live on the
    /// solver grid and is normalised before use.
    std::optional<Profile> initial_profile;
    /// Evaluate the energy after each step and record the largest relative
    /// drop. Costs one potential evaluation per sample and step.
    bool track_energy = true;

    void validate() const;
};

/// Normalised traveling wave for one value of delta plus solver diagnostics.
struct WaveSolution {
    double delta = 0.0;
    PeriodicGrid grid;
    Profile V;  ///< unit L2 norm, in the cone
    Profile R;  ///< = average(V)
    double lambda_sq = 0.0;
    double log_lambda_sq = 0.0;
    double sigma = 0.0;  ///< lambda * delta
    double r_peak = 0.0; ///< R(0)
    double a = 0.0;      ///< delta / R(0)
    double b = 0.0;      ///< sqrt(delta^2 a^mu lambda^2 exp(-1/a))
    long iterations = 0;
    double last_update = 0.0;
    double residual_inf = 0.0;
    double energy = 0.0; ///< +inf when above double range; see log_energy
    double log_energy = 0.0;
    bool converged = false;
    /// log P after each iterate (index 0 is the initial guess).
    std::vector<double> log_energy_trace;
    /// max over steps of (P_prev - P_next) / P_prev, clipped at 0.
    double max_relative_energy_drop = 0.0;
};

/// Solver failed to meet the tolerance; carries the last iterate.
class NotConverged : public Error {
public:
    NotConverged(const std::string& what, std::shared_ptr<const WaveSolution> last)
        : Error(what), last_(std::move(last)) {}
    const WaveSolution& last() const { return *last_; }
    std::shared_ptr<const WaveSolution> last_ptr() const { return last_; }

private:
    std::shared_ptr<const WaveSolution> last_;
};

/// Energy gradient G(V) = (1/delta) A Phi'(A V / delta), returned as
/// `direction * exp(log_scale)` so large forces never materialise.
struct GradientResult {
    Profile direction;
    double log_scale = 0.0;
    double direction_norm = 0.0; ///< ||direction||_2

    /// log ||G(V)||_2
    double log_norm() const;
    /// ||G(V)||_2; throws OverflowError when out of double range.
    double norm() const;
};

GradientResult gradient_map(const ForceModel& model, double delta, const Profile& v);

/// F(V) = G(V) / ||G(V)||_2.
Profile improvement_step(const ForceModel& model, double delta, const Profile& v);

/// Fixed-point iteration V <- F(V) from the configured initial guess.
/// Throws InvalidArgument for delta outside (0, 0.5] and NotConverged when
/// max_iter is exhausted.
WaveSolution solve_wave(const ForceModel& model, double delta, const PeriodicGrid& grid,
                        const SolverOptions& opts = {});

/// sup_i |lambda^2 V_i - G(V)_i| / lambda^2.
double residual(const ForceModel& model, const WaveSolution& sol);

/// P(V) = integral of Phi(A V / delta); +inf when above double range.
double energy(const ForceModel& model, double delta, const Profile& v);
/// log P(V), -inf for P = 0.
double log_energy(const ForceModel& model, double delta, const Profile& v);

/// Recomputes lambda^2, sigma, R(0), a and b from V.
void fill_scalars(const ForceModel& model, WaveSolution& sol);

} // namespace fpuwave
