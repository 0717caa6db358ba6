#pragma once

#include <vector>

namespace fpuwave {

/// High-energy approximation of the velocity profile,
/// (1+d) sinh(1/(2d)) / (cosh(1/(2d)) + cosh(x/d)).
double approx_velocity(double delta, double x);

/// High-energy approximation of the distance profile,
/// (d+d^2) ln(1 + sinh^2(1/(2d)) / cosh^2(x/(2d))).
double approx_distance(double delta, double x);

struct TipLimit {
    double value;  ///< S0 = 2 ln cosh y
    double d1;     ///< 2 tanh y
    double d2;     ///< 2 sech^2 y
};

TipLimit limit_tip(double y);
/// W0(y) = 1 + tanh y
double limit_transition(double y);
/// T0(y) = ln(2 cosh y) + y
double limit_foot(double y);

/// ln cosh y without overflow.
double log_cosh(double y);

struct PredictedScalars {
    double lambda_sq;      ///< delta^-mu exp(1 + 1/delta), +inf if out of range
    double log_lambda_sq;
    double b;              ///< 2 delta - 2 delta^2
    double a;              ///< delta + (2 ln 2 - 1) delta^2
};

PredictedScalars predicted_scalars(double delta, double mu);

struct OdeSolution {
    std::vector<double> y;
    std::vector<double> values;
    std::vector<double> derivs;
    double step = 0.0;
};

/// RK4 for S'' = 2 exp(-S), S(0) = S'(0) = 0 on [0, y_max].
OdeSolution integrate_limit_ode(double y_max, double step = 1e-3);

/// RK4 for the next-to-leading-order tip correction of a force with
/// Psi(r) = r^mu + c r^(mu-1) + ...:
/// S1'' = 2 (c - mu S0 - S1) exp(-S0), S1(0) = S1'(0) = 0, with S0 in closed form.
OdeSolution integrate_s1_ode(double mu, double c, double y_max, double step = 1e-3);

struct TodaWave {
    double velocity;  ///< -2 sinh^2(1/beta) / (cosh(1/beta) + cosh(2x/beta))
    double distance;  ///< ln(1 + sinh^2(1/beta) / cosh^2(x/beta))
    double speed;     ///< beta sinh(1/beta)
    double velocity_prime;
    double distance_prime;
};

/// Exact solitary wave of the Toda chain with parameter beta > 0.
TodaWave toda_exact(double beta, double x);

} // namespace fpuwave
