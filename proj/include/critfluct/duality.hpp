#pragma once

#include <utility>
#include <vector>

#include "critfluct/toy.hpp"

namespace critfluct {

// Rotation angle of the primed coordinates. Lambda(theta) applied to a jump
// (dw, db) gives (dq1p, dq2p) = (dw cos + db sin, -dw sin + db cos); theta is
// chosen so dq1p carries the fluctuation.
struct Rotation {
    double theta = 0.0;
};

struct ThetaEstimate {
    Rotation rot;
    double lambda1 = 0.0;  // principal eigenvalue of the jump covariance
    double lambda2 = 0.0;
    double ratio = 0.0;    // lambda2 / lambda1, small when jumps are one-dimensional
    long long used = 0;    // nonzero samples entering the estimate
    double mean_x1 = 0.0;
    double tan_theta_analytic = 0.0;  // 1 / <x1>, logged cross-check only
};

// Principal-component angle of the (dw, db) covariance over nonzero samples.
// Needs at least 1000 nonzero samples; an all-zero set is an estimation error.
ThetaEstimate estimate_theta(const std::vector<FluctuationSample>& samples);

std::pair<double, double> rotate(double dw, double db, const Rotation& rot);

// dq1p as a function of the input, at the frozen state:
//   q1p_rate(x1) = -gamma (x1 cos + sin) dH/dy,  y = w x1 + b.
double q1p_rate(double x1, const Composition& comp, const Rotation& rot, const ToyState& state,
                double x2);

// Leading rotated-gradient term -gamma cos(theta) dH/dy. Vanishes identically
// at theta = pi/2 and on dead regions of relu-family activations.
double toy_jacobian(double x1, const Composition& comp, const Rotation& rot, const ToyState& state,
                    double x2);

// Full derivative of the jump map,
//   d q1p_rate / d x1 = -gamma [cos dH/dy + (x1 cos + sin) w d2H/dy2],
// which matches central differences of q1p_rate and is the change-of-variables
// factor predicted_density divides by. Stays nonzero as theta -> pi/2.
double toy_jacobian_exact(double x1, const Composition& comp, const Rotation& rot,
                          const ToyState& state, double x2);

// Maximal x1-interval around the class mean on which the jump map is strictly
// monotone and not identically zero.
struct Branch {
    double x_lo = 0.0;
    double x_hi = 0.0;
    bool increasing = true;
    double mass = 0.0;  // Gaussian mass of [x_lo, x_hi] under the class input
};

struct BranchScan {
    std::vector<Branch> branches;  // ordered in x1 over [mu - 8 sigma, mu + 8 sigma]
    int dominant = -1;             // largest-mass branch
    bool single = true;            // false when the map folds inside the scanned range
};

BranchScan scan_branches(const Composition& comp, const Rotation& rot, const ToyState& state,
                         const ClassSpec& cls, int grid = 4096);

// Change-of-variables density of dq1p on one monotone branch:
//   p(dq) = p_x1(x1(dq)) / |d q1p_rate / d x1|,
// with x1(dq) found by bisection on the branch (tolerance 1e-12). Grid points
// whose dq lies outside the branch image get density 0. Monotonicity of the
// branch is revalidated numerically; a fold inside it is a MultiBranchError.
std::vector<double> predicted_density(const std::vector<double>& dq_grid, const Composition& comp,
                                      const Rotation& rot, const ToyState& state,
                                      const ClassSpec& cls, const Branch& branch);

// Affine form of the jump rate in y: q1p_rate = D y - C up to the gradient
// factor, with C = (gamma cos / w)(b - w tan), D = gamma cos / w. The sign
// condition D y - C > 0 is evaluated on the supplied y values and the violated
// fraction reported. w = 0 is a domain error.
struct CDConstants {
    double C = 0.0;
    double D = 0.0;
    double violated_fraction = 0.0;
};

CDConstants cd_constants(const ToyState& state, const Rotation& rot,
                         const std::vector<double>& y_values);

}  // namespace critfluct
