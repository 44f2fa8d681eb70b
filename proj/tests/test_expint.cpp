#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "critfluct/expint.hpp"

using namespace critfluct;

namespace {

// dense trapezoid oracle for the integral of e^t / t over [a, b], 0 excluded
double trapezoid_expint(double a, double b, int panels) {
    double h = (b - a) / panels;
    double acc = 0.5 * (std::exp(a) / a + std::exp(b) / b);
    for (int i = 1; i < panels; ++i) {
        double t = a + i * h;
        acc += std::exp(t) / t;
    }
    return acc * h;
}

}  // namespace

TEST_CASE("leading-order closed form") {
    CHECK(expint_approx(20.0) == std::exp(20.0) / 20.0);
    CHECK(expint_approx(-20.0) == std::exp(-20.0) / -20.0);
    CHECK(expint_approx(-20.0) < 0.0);
    CHECK(expint_approx(1.0) == doctest::Approx(std::exp(1.0)));

    // the expansion parameter is 1/x; inside the unit disc it is meaningless
    CHECK_THROWS_AS(expint_approx(0.5), DomainError);
    CHECK_THROWS_AS(expint_approx(-0.5), DomainError);
    CHECK_THROWS_AS(expint_approx(0.0), DomainError);
}

TEST_CASE("adaptive quadrature of e^t / t") {
    SUBCASE("agrees with a dense trapezoid rule away from the pole") {
        IntegralResult pos = expint_quadrature(1.0, 2.0);
        CHECK(pos.value == doctest::Approx(trapezoid_expint(1.0, 2.0, 1000000)).epsilon(1e-8));
        CHECK(pos.abs_err_est >= 0.0);
        CHECK(pos.abs_err_est < 1e-6);

        IntegralResult neg = expint_quadrature(-2.0, -1.0);
        CHECK(neg.value < 0.0);
        CHECK(neg.value == doctest::Approx(trapezoid_expint(-2.0, -1.0, 1000000)).epsilon(1e-8));
    }

    SUBCASE("degenerate interval integrates to zero") {
        CHECK(expint_quadrature(5.0, 5.0).value == doctest::Approx(0.0));
    }

    SUBCASE("intervals meeting the pole are refused") {
        CHECK_THROWS_AS(expint_quadrature(-1.0, 1.0), DomainError);
        CHECK_THROWS_AS(expint_quadrature(0.0, 1.0), DomainError);
        CHECK_THROWS_AS(expint_quadrature(-1.0, 0.0), DomainError);
        CHECK_THROWS_AS(expint_quadrature(0.0, 0.0), DomainError);
    }

    SUBCASE("tolerance must be positive") {
        CHECK_THROWS_AS(expint_quadrature(1.0, 2.0, 0.0), ConfigError);
        CHECK_THROWS_AS(expint_quadrature(1.0, 2.0, -1e-8), ConfigError);
    }
}

TEST_CASE("closed form is within its error budget of the integral") {
    // growth of e^t / t makes the integral from x/2 (or 2x on the negative
    // axis) a faithful stand-in for the full tail
    double quad_pos = expint_quadrature(10.0, 20.0).value;
    double rel_pos = std::abs(expint_approx(20.0) - quad_pos) / std::abs(quad_pos);
    CHECK(rel_pos < std::exp(1.0) / 20.0);

    double quad_neg = expint_quadrature(-40.0, -20.0).value;
    double rel_neg = std::abs(expint_approx(-20.0) - quad_neg) / std::abs(quad_neg);
    CHECK(rel_neg < std::exp(1.0) / 20.0);

    // the error bound tightens as |x| grows
    double quad_50 = expint_quadrature(25.0, 50.0).value;
    double rel_50 = std::abs(expint_approx(50.0) - quad_50) / std::abs(quad_50);
    CHECK(rel_50 < rel_pos);
}
