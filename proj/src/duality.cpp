#include "critfluct/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace critfluct {

const std::vector<Composition>& catalogue() {
    auto power_k = [](int n) { return static_cast<double>(n - 2) / static_cast<double>(n - 1); };
    static const std::vector<Composition> table = {
        {"sigmoid_mse", Activation::sigmoid, mean_squared_loss(), 1.0, 1.0},
        {"sigmoid_ce", Activation::sigmoid, cross_entropy_loss(), 1.0, 1.0},
        {"relu_p2", Activation::relu, power_loss(2), power_k(2), power_k(2)},
        {"relu_p4", Activation::relu, power_loss(4), power_k(4), power_k(4)},
        {"piecewise_ce", Activation::piecewise_unit, cross_entropy_loss(), 2.0, 2.0},
    };
    return table;
}

const Composition& composition_by_id(const std::string& id) {
    for (const auto& c : catalogue())
        if (c.id == id) return c;
    throw ConfigError("unknown composition id: " + id);
}

std::optional<std::pair<double, double>> predicted_exponent(const Composition& comp) {
    for (const auto& c : catalogue()) {
        if (c.activation == comp.activation && c.loss.kind == comp.loss.kind &&
            (c.loss.kind != Loss::Kind::power || c.loss.exponent == comp.loss.exponent)) {
            return std::make_pair(*c.k_minus, *c.k_plus);
        }
    }
    return std::nullopt;
}

double composition_value(double y, const Composition& comp, double x2) {
    return loss_value(comp.loss, activation_value(comp.activation, y), x2);
}

std::optional<double> asymptotic_composition_value(double y, const Composition& comp, double x2) {
    if (comp.activation != Activation::sigmoid) return std::nullopt;
    bool minus = x2 < 0.5;
    if (comp.loss.kind == Loss::Kind::mean_squared)
        return minus ? std::exp(2.0 * y) : std::exp(-2.0 * y);
    if (comp.loss.kind == Loss::Kind::cross_entropy)
        return minus ? std::exp(y) : std::exp(-y);
    return std::nullopt;
}

double composition_grad_y(double y, const Composition& comp, double x2) {
    double f = activation_value(comp.activation, y);
    return loss_grad_f(comp.loss, f, x2) * activation_deriv(comp.activation, y);
}

double composition_hess_y(double y, const Composition& comp, double x2) {
    double f = activation_value(comp.activation, y);
    double fp = activation_deriv(comp.activation, y);
    return loss_hess_f(comp.loss, f, x2) * fp * fp +
           loss_grad_f(comp.loss, f, x2) * activation_second(comp.activation, y);
}

ThetaEstimate estimate_theta(const std::vector<FluctuationSample>& samples) {
    double sw = 0.0, sb = 0.0, sx = 0.0;
    long long n = 0;
    for (const auto& s : samples) {
        if (s.dw == 0.0 && s.db == 0.0) continue;
        sw += s.dw;
        sb += s.db;
        sx += s.x1;
        ++n;
    }
    if (n == 0) throw EstimationError("all jump samples are zero, rotation undefined");
    if (n < 1000) {
        std::ostringstream msg;
        msg << "need at least 1000 nonzero jump samples for the rotation, got " << n;
        throw EstimationError(msg.str());
    }
    double mw = sw / n, mb = sb / n, mx = sx / n;
    double cww = 0.0, cbb = 0.0, cwb = 0.0;
    for (const auto& s : samples) {
        if (s.dw == 0.0 && s.db == 0.0) continue;
        double a = s.dw - mw, b = s.db - mb;
        cww += a * a;
        cbb += b * b;
        cwb += a * b;
    }
    cww /= n;
    cbb /= n;
    cwb /= n;

    // Closed-form 2x2 eigen decomposition; theta is the major-axis angle.
    double half_tr = 0.5 * (cww + cbb);
    double disc = std::hypot(0.5 * (cww - cbb), cwb);
    double l1 = half_tr + disc;
    double l2 = std::max(0.0, half_tr - disc);
    if (!(l1 > 0.0)) throw EstimationError("jump covariance is singular, rotation undefined");
    double theta = 0.5 * std::atan2(2.0 * cwb, cww - cbb);
    if (theta < 0.0) theta += std::numbers::pi;  // orientation in [0, pi)

    ThetaEstimate est;
    est.rot = {theta};
    est.lambda1 = l1;
    est.lambda2 = l2;
    est.ratio = l2 / l1;
    est.used = n;
    est.mean_x1 = mx;
    est.tan_theta_analytic = mx != 0.0 ? 1.0 / mx : std::numeric_limits<double>::infinity();
    return est;
}

std::pair<double, double> rotate(double dw, double db, const Rotation& rot) {
    double c = std::cos(rot.theta), s = std::sin(rot.theta);
    return {c * dw + s * db, -s * dw + c * db};
}

double q1p_rate(double x1, const Composition& comp, const Rotation& rot, const ToyState& state,
                double x2) {
    double y = state.w * x1 + state.b;
    double pref = x1 * std::cos(rot.theta) + std::sin(rot.theta);
    return -state.gamma * pref * composition_grad_y(y, comp, x2);
}

double toy_jacobian(double x1, const Composition& comp, const Rotation& rot, const ToyState& state,
                    double x2) {
    double y = state.w * x1 + state.b;
    return -state.gamma * std::cos(rot.theta) * composition_grad_y(y, comp, x2);
}

double toy_jacobian_exact(double x1, const Composition& comp, const Rotation& rot,
                          const ToyState& state, double x2) {
    double y = state.w * x1 + state.b;
    double c = std::cos(rot.theta);
    double pref = x1 * c + std::sin(rot.theta);
    return -state.gamma *
           (c * composition_grad_y(y, comp, x2) + pref * state.w * composition_hess_y(y, comp, x2));
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double class_mass(const ClassSpec& cls, double lo, double hi) {
    return normal_cdf((hi - cls.mu) / cls.sigma) - normal_cdf((lo - cls.mu) / cls.sigma);
}

double class_pdf(const ClassSpec& cls, double x) {
    double z = (x - cls.mu) / cls.sigma;
    return std::exp(-0.5 * z * z) / (cls.sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

BranchScan scan_branches(const Composition& comp, const Rotation& rot, const ToyState& state,
                         const ClassSpec& cls, int grid) {
    if (grid < 16) throw StructuralError("branch scan grid too coarse");
    double lo = cls.mu - 8.0 * cls.sigma;
    double hi = cls.mu + 8.0 * cls.sigma;
    double h = (hi - lo) / grid;

    std::vector<double> xs(grid + 1), g(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        xs[i] = lo + i * h;
        g[i] = q1p_rate(xs[i], comp, rot, state, cls.x2);
    }

    // Split the scan range into maximal runs of constant slope sign, skipping
    // flat (dead) segments; each surviving run is a candidate branch.
    BranchScan scan;
    int i = 0;
    while (i < grid) {
        while (i < grid && g[i + 1] == g[i]) ++i;  // flat: no usable inverse
        if (i >= grid) break;
        bool inc = g[i + 1] > g[i];
        int start = i;
        while (i < grid && (g[i + 1] > g[i]) == inc && g[i + 1] != g[i]) ++i;
        Branch br;
        br.x_lo = xs[start];
        br.x_hi = xs[i];
        br.increasing = inc;
        br.mass = class_mass(cls, br.x_lo, br.x_hi);
        scan.branches.push_back(br);
    }
    if (scan.branches.empty())
        throw EstimationError("jump map is flat over the scanned range, no branch to invert");
    scan.dominant = 0;
    for (size_t k = 1; k < scan.branches.size(); ++k)
        if (scan.branches[k].mass > scan.branches[scan.dominant].mass)
            scan.dominant = static_cast<int>(k);
    scan.single = scan.branches.size() == 1;
    return scan;
}

namespace {

// Bisection inverse of q1p_rate on a branch previously screened monotone.
double invert_on_branch(double target, const Composition& comp, const Rotation& rot,
                        const ToyState& state, double x2, const Branch& br) {
    double a = br.x_lo, b = br.x_hi;
    double fa = q1p_rate(a, comp, rot, state, x2);
    double fb = q1p_rate(b, comp, rot, state, x2);
    double sgn = br.increasing ? 1.0 : -1.0;
    if ((target - fa) * sgn < 0.0 || (target - fb) * sgn > 0.0)
        return std::numeric_limits<double>::quiet_NaN();  // outside the branch image
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        double fm = q1p_rate(m, comp, rot, state, x2);
        if ((fm - target) * sgn < 0.0)
            a = m;
        else
            b = m;
        if (b - a < 1e-12) break;
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> predicted_density(const std::vector<double>& dq_grid, const Composition& comp,
                                      const Rotation& rot, const ToyState& state,
                                      const ClassSpec& cls, const Branch& branch) {
    // Revalidate monotonicity on the branch; a fold inside it would silently
    // corrupt the change of variables.
    constexpr int kCheck = 512;
    double h = (branch.x_hi - branch.x_lo) / kCheck;
    if (!(h > 0.0)) throw StructuralError("empty branch interval");
    double prev = q1p_rate(branch.x_lo, comp, rot, state, cls.x2);
    for (int i = 1; i <= kCheck; ++i) {
        double cur = q1p_rate(branch.x_lo + i * h, comp, rot, state, cls.x2);
        if (branch.increasing ? cur <= prev : cur >= prev)
            throw MultiBranchError("jump map is not monotone on the requested branch");
        prev = cur;
    }

    std::vector<double> density(dq_grid.size(), 0.0);
    for (size_t i = 0; i < dq_grid.size(); ++i) {
        double x = invert_on_branch(dq_grid[i], comp, rot, state, cls.x2, branch);
        if (!std::isfinite(x)) continue;
        double jac = std::abs(toy_jacobian_exact(x, comp, rot, state, cls.x2));
        if (jac < 1e-300) continue;
        density[i] = class_pdf(cls, x) / jac;
    }
    return density;
}

CDConstants cd_constants(const ToyState& state, const Rotation& rot,
                         const std::vector<double>& y_values) {
    if (state.w == 0.0) throw DomainError("cd constants undefined at w = 0");
    double c = std::cos(rot.theta);
    double t = std::tan(rot.theta);
    CDConstants out;
    out.D = state.gamma * c / state.w;
    out.C = out.D * (state.b - state.w * t);
    if (!y_values.empty()) {
        long long violated = 0;
        for (double y : y_values)
            if (!(out.D * y - out.C > 0.0)) ++violated;
        out.violated_fraction = static_cast<double>(violated) / y_values.size();
    }
    return out;
}

}  // namespace critfluct
