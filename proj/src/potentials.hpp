#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fpuwave {

/// Force function Phi'(r) = Psi(r) exp(r) on r >= 0.
///
/// The exponential factor is kept apart from Psi so callers can work with
/// log Phi'(r) = log Psi(r) + r when r/delta is large.
class ForceModel {
public:
    using ScalarFn = std::function<double(double)>;

    struct Definition {
        std::string name;
        double mu = 0.0;
        ScalarFn psi;
        ScalarFn psi_prime;
        /// log Psi(r); defaults to std::log(psi(r)).
        ScalarFn log_psi;
        /// Phi(r) with Phi(0) = 0 and its logarithm, both optional.
        ScalarFn potential;
        ScalarFn log_potential;
        double assumption_c = 1.0;
        /// Power-family parameters, kept for serialisation.
        int power_m = 0;
        std::vector<double> power_c;
    };

    explicit ForceModel(Definition def);

    const std::string& name() const { return def_.name; }
    double mu() const { return def_.mu; }
    double assumption_c() const { return def_.assumption_c; }
    bool has_closed_potential() const { return static_cast<bool>(def_.potential); }
    int power_m() const { return def_.power_m; }
    const std::vector<double>& power_c() const { return def_.power_c; }

    double psi(double r) const { return def_.psi(r); }
    double psi_prime(double r) const { return def_.psi_prime(r); }
    double log_psi(double r) const;

    /// Phi'(r); throws InvalidArgument for r < 0.
    double force(double r) const;
    /// log Phi'(r), -infinity at r = 0.
    double log_force(double r) const;
    /// Phi(r); closed form when available, else adaptive Simpson to 1e-10.
    double potential(double r) const;
    /// log Phi(r), finite far beyond the double range of Phi itself.
    double log_potential(double r) const;

private:
    Definition def_;
};

/// Phi'(r) = (r^m + c_{m-1} r^{m-1} + ... + c_1 r) e^r with mu = m.
/// `c[j-1]` holds c_j; missing entries are zero. Throws on negative entries.
ForceModel power_family(int m, std::vector<double> c = {});

/// Phi'(r) = e^r - 1, mu = 0.
ForceModel toda();

struct ValidationReport {
    bool passed = true;
    /// sup over samples of r |Psi(r)/r^mu - 1|
    double empirical_c = 0.0;
    /// First sample where positivity or Psi' + Psi >= 0 fails.
    std::optional<double> violation_at;
    std::string message;
};

/// Samples (0, r_max] log-uniformly and checks the structural hypotheses on
/// Psi. Advisory: a failed report does not stop a model from being used.
ValidationReport validate_assumption(const ForceModel& model, double r_max, int samples);

/// Adaptive Simpson quadrature of f on [a, b] to relative tolerance `rel_tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

} // namespace fpuwave
