#include <cmath>

#include <doctest.h>

#include "error.hpp"
#include "oracles.hpp"
#include "potentials.hpp"

using namespace fpuwave;

namespace {

const double e = std::exp(1.0);

// Psi(r) = r + r^2 / (1 + r): no closed-form potential.
ForceModel rational_model() {
    ForceModel::Definition d;
    d.name = "rational";
    d.mu = 1.0;
    d.psi = [](double r) { return r + r * r / (1 + r); };
    d.psi_prime = [](double r) { return 1 + (2 * r + r * r) / ((1 + r) * (1 + r)); };
    return ForceModel(d);
}

} // namespace

TEST_CASE("power family values") {
    const auto m = power_family(2, {2.0});
    CHECK(m.mu() == 2.0);
    CHECK(m.force(1.0) == doctest::Approx(3 * e).epsilon(1e-15));
    CHECK(m.force(0.0) == 0.0);
    CHECK(m.potential(1.0) == doctest::Approx(e).epsilon(1e-14));
    CHECK(m.potential(2.0) == doctest::Approx(4 * e * e).epsilon(1e-14));
    CHECK(power_family(1).force(1.0) == doctest::Approx(e).epsilon(1e-15));
    CHECK_THROWS_AS(power_family(2, {-1.0}), InvalidArgument);
    CHECK_THROWS_AS(m.force(-0.1), InvalidArgument);
}

TEST_CASE("toda values") {
    const auto t = toda();
    CHECK(t.mu() == 0.0);
    CHECK(t.force(0.0) == 0.0);
    CHECK(t.force(1.0) == doctest::Approx(e - 1).epsilon(1e-15));
    CHECK(t.potential(1.0) == doctest::Approx(e - 2).epsilon(1e-14));
    CHECK(t.potential(0.0) == 0.0);
}

TEST_CASE("potential by quadrature matches a fine Simpson rule") {
    const auto m = rational_model();
    CHECK_FALSE(m.has_closed_potential());
    const double want = oracle::simpson([&](double r) { return m.force(r); }, 0.0, 1.0, 200000);
    CHECK(std::abs(m.potential(1.0) - want) <= 1e-9 * want);
    CHECK(m.potential(0.0) == 0.0);
}

TEST_CASE("log-space evaluators") {
    for (const auto& m : {power_family(2, {2.0}), toda(), rational_model()}) {
        for (double r : {0.01, 0.5, 3.0, 30.0}) {
            CHECK(m.log_force(r) == doctest::Approx(std::log(m.force(r))).epsilon(1e-12));
            CHECK(m.log_potential(r) == doctest::Approx(std::log(m.potential(r))).epsilon(1e-8));
        }
        CHECK(std::isfinite(m.log_force(2000.0)));
        CHECK(std::isinf(m.log_force(0.0)));
    }
}

TEST_CASE("force is nondecreasing and consistent with potential and psi'") {
    for (const auto& m : {power_family(2, {2.0}), power_family(3, {0.5, 1.0}), toda(), rational_model()}) {
        double prev = 0.0;
        for (double r = 0.0; r <= 20.0; r += 0.05) {
            const double f = m.force(r);
            CHECK(f >= prev);
            prev = f;
        }
        for (double r = 0.1; r <= 5.0; r += 0.35) {
            const double dphi = oracle::central_difference([&](double s) { return m.potential(s); }, r, 1e-4);
            CHECK(dphi == doctest::Approx(m.force(r)).epsilon(1e-6));
            const double dpsi = oracle::central_difference([&](double s) { return m.psi(s); }, r, 1e-5);
            CHECK(dpsi == doctest::Approx(m.psi_prime(r)).epsilon(1e-6));
        }
    }
}

TEST_CASE("assumption validation") {
    const auto t = validate_assumption(toda(), 50.0, 400);
    CHECK(t.passed);
    CHECK(t.empirical_c <= 1.0);

    const auto p = validate_assumption(power_family(2, {2.0}), 50.0, 400);
    CHECK(p.passed);
    CHECK(p.empirical_c == doctest::Approx(2.0).epsilon(1e-12));

    ForceModel::Definition d;
    d.name = "bad";
    d.mu = 1.0;
    d.psi = [](double r) { return r - r * r; };
    d.psi_prime = [](double r) { return 1 - 2 * r; };
    const auto bad = validate_assumption(ForceModel(d), 2.0, 200);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.violation_at.has_value());
    CHECK(*bad.violation_at <= 1.0 + 1e-12);
}

TEST_CASE("adaptive simpson") {
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 10.0, 1e-12) ==
          doctest::Approx(std::expm1(10.0)).epsilon(1e-11));
}
