#pragma once

#include "critfluct/errors.hpp"

namespace critfluct {

// Leading asymptotic term exp(x)/x of the antiderivative of e^z/z. Only
// meaningful for |x| >= 1; smaller |x| is a DomainError (out of regime).
double expint_approx(double x);

struct IntegralResult {
    double value = 0.0;
    double abs_err_est = 0.0;
};

// Adaptive quadrature of e^z/z over [x0, x]. The interval must not contain or
// touch 0. tol is a relative tolerance on the result.
IntegralResult expint_quadrature(double x0, double x, double tol = 1e-10);

}  // namespace critfluct
