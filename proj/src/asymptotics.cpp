#include "asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace fpuwave {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// Above this argument hyperbolics switch to exponential-difference form.
constexpr double kHyperbolicSeam = 20.0;

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

// ln sinh(u) for u > 0.
double log_sinh(double u) {
    if (u < kHyperbolicSeam) return std::log(std::sinh(u));
    return u - kLn2 + std::log1p(-std::exp(-2.0 * u));
}

// ln(cosh u + cosh w) for u, w >= 0.
double log_cosh_sum(double u, double w) {
    const double m = std::max(u, w);
    const double e = std::exp(u - m) + std::exp(-u - m) + std::exp(w - m) + std::exp(-w - m);
    return m - kLn2 + std::log(e);
}

// ln(1 + sinh^2(a) / cosh^2(c)) for a > 0.
double log_one_plus_sinh_ratio(double a, double c) {
    const double log_q = 2.0 * log_sinh(a) - 2.0 * log_cosh(c);
    if (log_q < 0.0) return std::log1p(std::exp(log_q));
    return log_q + std::log1p(std::exp(-log_q));
}

using State = std::array<double, 2>;

template <class Rhs>
OdeSolution rk4(Rhs rhs, double y_max, double step) {
    if (!(y_max > 0.0)) throw InvalidArgument("ODE interval end must be positive");
    if (!(step > 0.0)) throw InvalidArgument("ODE step must be positive");
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(y_max / step)));
    const double h = y_max / static_cast<double>(n);

    OdeSolution out;
    out.step = h;
    out.y.reserve(n + 1);
    out.values.reserve(n + 1);
    out.derivs.reserve(n + 1);

    State s{0.0, 0.0};
    out.y.push_back(0.0);
    out.values.push_back(s[0]);
    out.derivs.push_back(s[1]);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(i) * h;
        const State k1 = rhs(y, s);
        const State k2 = rhs(y + 0.5 * h, {s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]});
        const State k3 = rhs(y + 0.5 * h, {s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]});
        const State k4 = rhs(y + h, {s[0] + h * k3[0], s[1] + h * k3[1]});
        for (int c = 0; c < 2; ++c) s[c] += h / 6.0 * (k1[c] + 2.0 * (k2[c] + k3[c]) + k4[c]);
        out.y.push_back(static_cast<double>(i + 1) * h);
        out.values.push_back(s[0]);
        out.derivs.push_back(s[1]);
    }
    return out;
}

} // namespace

double log_cosh(double y) {
    const double a = std::abs(y);
    if (a < kHyperbolicSeam) {
        const double s = std::sinh(0.5 * a);
        return std::log1p(2.0 * s * s);
    }
    return a - kLn2 + std::log1p(std::exp(-2.0 * a));
}

double approx_velocity(double delta, double x) {
    require_positive(delta, "delta");
    const double a = 0.5 / delta;
    const double w = std::abs(x) / delta;
    return (1.0 + delta) * std::exp(log_sinh(a) - log_cosh_sum(a, w));
}

double approx_distance(double delta, double x) {
    require_positive(delta, "delta");
    return (delta + delta * delta) * log_one_plus_sinh_ratio(0.5 / delta, 0.5 * std::abs(x) / delta);
}

TipLimit limit_tip(double y) {
    const double e = std::exp(-2.0 * std::abs(y));
    const double sech_sq = 4.0 * e / ((1.0 + e) * (1.0 + e));
    return {2.0 * log_cosh(y), 2.0 * std::tanh(y), 2.0 * sech_sq};
}

double limit_transition(double y) { return 1.0 + std::tanh(y); }

double limit_foot(double y) {
    // ln(2 cosh y) + y = ln(1 + e^{2y})
    if (y <= 0.0) return std::log1p(std::exp(2.0 * y));
    return 2.0 * y + std::log1p(std::exp(-2.0 * y));
}

PredictedScalars predicted_scalars(double delta, double mu) {
    require_positive(delta, "delta");
    PredictedScalars p{};
    p.log_lambda_sq = -mu * std::log(delta) + 1.0 + 1.0 / delta;
    p.lambda_sq = std::exp(p.log_lambda_sq);
    p.b = 2.0 * delta - 2.0 * delta * delta;
    p.a = delta + (2.0 * kLn2 - 1.0) * delta * delta;
    return p;
}

OdeSolution integrate_limit_ode(double y_max, double step) {
    return rk4([](double, const State& s) -> State { return {s[1], 2.0 * std::exp(-s[0])}; },
               y_max, step);
}

OdeSolution integrate_s1_ode(double mu, double c, double y_max, double step) {
    return rk4(
        [mu, c](double y, const State& s) -> State {
            const auto tip = limit_tip(y);
            // exp(-S0) = sech^2 y = S0'' / 2
            return {s[1], (c - mu * tip.value - s[0]) * tip.d2};
        },
        y_max, step);
}

TodaWave toda_exact(double beta, double x) {
    require_positive(beta, "beta");
    const double a = 1.0 / beta;
    const double u = std::abs(x) / beta;
    const double sign = x < 0.0 ? -1.0 : 1.0;
    const double log_ss = 2.0 * log_sinh(a);
    const double log_den = log_cosh_sum(a, 2.0 * u);

    TodaWave w{};
    w.velocity = -std::exp(kLn2 + log_ss - log_den);
    w.distance = log_one_plus_sinh_ratio(a, u);
    w.speed = beta * std::sinh(a);
    // V' = (4/beta) sinh^2(a) sinh(2u) / (cosh a + cosh 2u)^2
    w.velocity_prime =
        u == 0.0 ? 0.0
                 : sign * std::exp(std::log(4.0 * a) + log_ss + log_sinh(2.0 * u) - 2.0 * log_den);
    // R' = -(2/beta) tanh(u) q / (1 + q), q = sinh^2(a) / cosh^2(u)
    const double log_q = log_ss - 2.0 * log_cosh(u);
    const double frac = log_q < 0.0 ? std::exp(log_q) / (1.0 + std::exp(log_q))
                                    : 1.0 / (1.0 + std::exp(-log_q));
    w.distance_prime = -2.0 * a * sign * std::tanh(u) * frac;
    return w;
}

} // namespace fpuwave
