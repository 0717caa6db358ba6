#include "potentials.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace fpuwave {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nonnegative(double r, const char* what) {
    if (!(r >= 0.0)) {
        std::ostringstream os;
        os << what << " is defined for r >= 0 only, got r = " << r;
        throw InvalidArgument(os.str());
    }
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// Integral over [0, r] of s^j e^s, stable for r < 1 through the tail series
// j! e^r sum_{i>j} (-1)^{i+j+1} r^i / i!.
double poly_exp_integral_small(int j, double r) {
    double factorial_j = 1.0;
    for (int i = 2; i <= j; ++i) factorial_j *= i;
    double term = 1.0;  // r^i / i!
    for (int i = 1; i <= j; ++i) term *= r / i;
    double sum = 0.0;
    for (int i = j + 1; i < j + 60; ++i) {
        term *= r / i;
        const double signed_term = ((i + j + 1) % 2 == 0) ? term : -term;
        sum += signed_term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return factorial_j * std::exp(r) * sum;
}

// (-1)^j j! (P_j(r) - e^{-r}) with P_j(r) = sum_{i<=j} (-r)^i / i!; multiplying
// by e^r gives the integral over [0, r] of s^j e^s.
double poly_exp_integral_scaled(int j, double r) {
    double factorial_j = 1.0;
    for (int i = 2; i <= j; ++i) factorial_j *= i;
    double p = 0.0;
    double term = 1.0;
    for (int i = 0; i <= j; ++i) {
        if (i > 0) term *= -r / i;
        p += term;
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial_j * (p - std::exp(-r));
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Coarse estimate sets the absolute target for the recursion.
    const double scale = std::max(std::abs(whole), std::numeric_limits<double>::min());
    return simpson_step(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 50);
}

ForceModel::ForceModel(Definition def) : def_(std::move(def)) {
    if (!def_.psi || !def_.psi_prime) {
        throw InvalidArgument("force model '" + def_.name + "' needs psi and psi_prime");
    }
}

double ForceModel::log_psi(double r) const {
    if (def_.log_psi) return def_.log_psi(r);
    const double p = def_.psi(r);
    return p > 0.0 ? std::log(p) : kNegInf;
}

double ForceModel::force(double r) const {
    require_nonnegative(r, "force");
    if (r == 0.0) return 0.0;
    return std::exp(log_force(r));
}

double ForceModel::log_force(double r) const {
    require_nonnegative(r, "force");
    if (r == 0.0) return kNegInf;
    return log_psi(r) + r;
}

double ForceModel::potential(double r) const {
    require_nonnegative(r, "potential");
    if (r == 0.0) return 0.0;
    if (def_.potential) return def_.potential(r);
    return adaptive_simpson([this](double s) { return s == 0.0 ? 0.0 : force(s); }, 0.0, r,
                            1e-10);
}

double ForceModel::log_potential(double r) const {
    require_nonnegative(r, "potential");
    if (r == 0.0) return kNegInf;
    if (def_.log_potential) return def_.log_potential(r);
    if (def_.potential && r < 600.0) return std::log(def_.potential(r));
    // Phi(r) = e^r * integral of Psi(s) e^{s - r} over [0, r].
    const double scaled = adaptive_simpson(
        [this, r](double s) { return s == 0.0 ? 0.0 : std::exp(log_psi(s) + s - r); }, 0.0, r,
        1e-10);
    return r + std::log(scaled);
}

ForceModel power_family(int m, std::vector<double> c) {
    if (m < 1) throw InvalidArgument("power family needs m >= 1");
    if (c.size() > static_cast<std::size_t>(m - 1)) {
        throw InvalidArgument("power family of order m takes at most m - 1 coefficients");
    }
    for (double cj : c) {
        if (!(cj >= 0.0)) throw InvalidArgument("power family coefficients must be nonnegative");
    }
    c.resize(static_cast<std::size_t>(m - 1), 0.0);

    // coeff[j] multiplies r^j in Psi, j = 1..m.
    std::vector<double> coeff(static_cast<std::size_t>(m + 1), 0.0);
    for (int j = 1; j < m; ++j) coeff[j] = c[j - 1];
    coeff[m] = 1.0;

    ForceModel::Definition def;
    std::ostringstream name;
    name << "power(m=" << m;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] != 0.0) name << ", c" << (j + 1) << "=" << c[j];
    }
    name << ")";
    def.name = name.str();
    def.mu = m;
    def.power_m = m;
    def.power_c = c;
    double csum = 0.0;
    for (double cj : c) csum += cj;
    def.assumption_c = std::max(csum, 1.0);

    def.psi = [coeff](double r) {
        double s = 0.0;
        for (std::size_t j = coeff.size(); j-- > 1;) s = (s + coeff[j]) * r;
        return s;
    };
    def.psi_prime = [coeff](double r) {
        double s = 0.0;
        for (std::size_t j = coeff.size(); j-- > 1;) s = s * r + j * coeff[j];
        return s;
    };
    def.potential = [coeff](double r) {
        double s = 0.0;
        for (std::size_t j = 1; j < coeff.size(); ++j) {
            if (coeff[j] == 0.0) continue;
            const int jj = static_cast<int>(j);
            s += coeff[j] * (r < 1.0 ? poly_exp_integral_small(jj, r)
                                     : std::exp(r) * poly_exp_integral_scaled(jj, r));
        }
        return s;
    };
    def.log_potential = [coeff](double r) {
        if (r < 1.0) {
            double s = 0.0;
            for (std::size_t j = 1; j < coeff.size(); ++j) {
                if (coeff[j] != 0.0) s += coeff[j] * poly_exp_integral_small(static_cast<int>(j), r);
            }
            return std::log(s);
        }
        double s = 0.0;
        for (std::size_t j = 1; j < coeff.size(); ++j) {
            if (coeff[j] != 0.0) s += coeff[j] * poly_exp_integral_scaled(static_cast<int>(j), r);
        }
        return r + std::log(s);
    };
    return ForceModel(std::move(def));
}

ForceModel toda() {
    ForceModel::Definition def;
    def.name = "toda";
    def.mu = 0.0;
    def.assumption_c = 1.0;
    def.psi = [](double r) { return -std::expm1(-r); };
    def.psi_prime = [](double r) { return std::exp(-r); };
    def.log_psi = [](double r) { return std::log(-std::expm1(-r)); };
    def.potential = [](double r) {
        if (r < 1e-3) return r * r * (0.5 + r * (1.0 / 6.0 + r * (1.0 / 24.0 + r / 120.0)));
        return std::expm1(r) - r;
    };
    def.log_potential = [](double r) {
        if (r < 1.0) {
            const double p = r < 1e-3 ? r * r * (0.5 + r * (1.0 / 6.0 + r * (1.0 / 24.0 + r / 120.0)))
                                      : std::expm1(r) - r;
            return std::log(p);
        }
        return r + std::log1p(-(1.0 + r) * std::exp(-r));
    };
    return ForceModel(std::move(def));
}

ValidationReport validate_assumption(const ForceModel& model, double r_max, int samples) {
    if (!(r_max > 0.0)) throw InvalidArgument("validate_assumption needs r_max > 0");
    if (samples < 2) throw InvalidArgument("validate_assumption needs at least 2 samples");

    ValidationReport report;
    const double r_min = r_max * 1e-6;
    const double ratio = std::log(r_max / r_min);
    std::ostringstream msg;
    for (int i = 0; i < samples; ++i) {
        const double r = r_min * std::exp(ratio * i / (samples - 1));
        const double psi = model.psi(r);
        const double dpsi = model.psi_prime(r);
        if (!(psi > 0.0) || !(dpsi + psi >= 0.0)) {
            if (!report.violation_at) {
                report.violation_at = r;
                msg << (psi > 0.0 ? "Psi' + Psi < 0" : "Psi <= 0") << " at r = " << r << "; ";
            }
            report.passed = false;
            continue;
        }
        const double dev = r * std::abs(psi / std::pow(r, model.mu()) - 1.0);
        report.empirical_c = std::max(report.empirical_c, dev);
    }
    if (report.empirical_c > model.assumption_c()) {
        msg << "warning: r |Psi/r^mu - 1| reaches " << report.empirical_c
            << " above the declared constant " << model.assumption_c() << "; ";
    }
    report.message = msg.str();
    return report;
}

} // namespace fpuwave
