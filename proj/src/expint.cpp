#include "critfluct/expint.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace critfluct {

double expint_approx(double x) {
    if (std::abs(x) < 1.0) {
        std::ostringstream msg;
        msg << "leading-term approximation requires |x| >= 1, got x = " << x;
        throw DomainError(msg.str());
    }
    return std::exp(x) / x;
}

IntegralResult expint_quadrature(double x0, double x, double tol) {
    if (!(tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
    double lo = std::min(x0, x), hi = std::max(x0, x);
    if (lo <= 0.0 && hi >= 0.0)
        throw DomainError("integration interval must not contain or touch the pole at 0");

    auto integrand = [](double z) { return std::exp(z) / z; };
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, x0, x, 15, tol, &err);
    IntegralResult out;
    out.value = val;
    out.abs_err_est = err;
    return out;
}

}  // namespace critfluct
