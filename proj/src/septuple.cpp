#include "critfluct/septuple.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace critfluct {

double activation_value(Activation f, double y) {
    switch (f) {
        case Activation::sigmoid:
            // Evaluate through exp(-|y|) so neither branch overflows.
            if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
            {
                double e = std::exp(y);
                return e / (1.0 + e);
            }
        case Activation::relu:
            return y > 0.0 ? y : 0.0;
        case Activation::piecewise_unit:
            return (y > 0.0 && y < 1.0) ? y : 0.0;
        case Activation::identity:
            return y;
    }
    return 0.0;
}

double activation_deriv(Activation f, double y) {
    switch (f) {
        case Activation::sigmoid: {
            double s = activation_value(Activation::sigmoid, y);
            return s * (1.0 - s);
        }
        case Activation::relu:
            return y > 0.0 ? 1.0 : 0.0;  // subgradient 0 at the kink
        case Activation::piecewise_unit:
            return (y > 0.0 && y < 1.0) ? 1.0 : 0.0;
        case Activation::identity:
            return 1.0;
    }
    return 0.0;
}

double activation_second(Activation f, double y) {
    switch (f) {
        case Activation::sigmoid: {
            double s = activation_value(Activation::sigmoid, y);
            return s * (1.0 - s) * (1.0 - 2.0 * s);
        }
        case Activation::relu:
        case Activation::piecewise_unit:
        case Activation::identity:
            return 0.0;
    }
    return 0.0;
}

Loss mean_squared_loss() { return {Loss::Kind::mean_squared, 2}; }
Loss cross_entropy_loss() { return {Loss::Kind::cross_entropy, 2}; }

Loss power_loss(int exponent) {
    if (exponent < 1) throw StructuralError("power loss exponent must be a positive integer");
    return {Loss::Kind::power, exponent};
}

namespace {

double clamp_prob(double f) { return std::clamp(f, kProbClamp, 1.0 - kProbClamp); }

double ipow(double base, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

}  // namespace

double loss_value(const Loss& loss, double f, double x2) {
    switch (loss.kind) {
        case Loss::Kind::mean_squared:
            return (f - x2) * (f - x2);
        case Loss::Kind::cross_entropy: {
            double p = clamp_prob(f);
            return -(1.0 - x2) * std::log(1.0 - p) - x2 * std::log(p);
        }
        case Loss::Kind::power:
            return ipow(f - x2, loss.exponent);
    }
    return 0.0;
}

double loss_grad_f(const Loss& loss, double f, double x2) {
    switch (loss.kind) {
        case Loss::Kind::mean_squared:
            return 2.0 * (f - x2);
        case Loss::Kind::cross_entropy: {
            double p = clamp_prob(f);
            return (1.0 - x2) / (1.0 - p) - x2 / p;
        }
        case Loss::Kind::power:
            return loss.exponent * ipow(f - x2, loss.exponent - 1);
    }
    return 0.0;
}

double loss_hess_f(const Loss& loss, double f, double x2) {
    switch (loss.kind) {
        case Loss::Kind::mean_squared:
            return 2.0;
        case Loss::Kind::cross_entropy: {
            double p = clamp_prob(f);
            return (1.0 - x2) / ((1.0 - p) * (1.0 - p)) + x2 / (p * p);
        }
        case Loss::Kind::power: {
            int n = loss.exponent;
            if (n < 2) return 0.0;
            return n * (n - 1) * ipow(f - x2, n - 2);
        }
    }
    return 0.0;
}

NetworkState::NetworkState(std::vector<double> values, std::vector<bool> boundary_mask)
    : x(std::move(values)), boundary(std::move(boundary_mask)) {
    if (x.size() != boundary.size())
        throw StructuralError("state values and boundary mask differ in length");
    if (x.size() < 2) throw StructuralError("network needs at least two neurons");
    long n_boundary = std::count(boundary.begin(), boundary.end(), true);
    if (n_boundary == 0 || n_boundary == static_cast<long>(x.size()))
        throw StructuralError("network needs at least one boundary and one bulk neuron");
}

void NetworkState::reset_bulk(double c) {
    for (size_t i = 0; i < x.size(); ++i)
        if (!boundary[i]) x[i] = c;
}

Assembled assemble(const TrainableMap& map, int n) {
    if (n < 2 || n > 16) throw StructuralError("dense assembly supports 2..16 neurons");
    int nq = static_cast<int>(map.q.size());
    Assembled out{SquareMatrix(n), std::vector<double>(n, 0.0)};
    std::set<std::pair<int, int>> w_seen;
    std::set<int> b_seen;
    for (const auto& s : map.weights) {
        if (s.i < 0 || s.i >= n || s.j < 0 || s.j >= n || s.l < 0 || s.l >= nq)
            throw StructuralError("weight slot index out of range");
        if (!w_seen.insert({s.i, s.j}).second)
            throw StructuralError("duplicate weight slot");
        out.w.at(s.i, s.j) = map.q[s.l];
    }
    for (const auto& s : map.biases) {
        if (s.i < 0 || s.i >= n || s.l < 0 || s.l >= nq)
            throw StructuralError("bias slot index out of range");
        if (!b_seen.insert(s.i).second) throw StructuralError("duplicate bias slot");
        out.b[s.i] = map.q[s.l];
    }
    return out;
}

NetworkState activation_step(const NetworkState& state, const Assembled& net, Activation f) {
    int n = state.size();
    if (net.w.n != n || static_cast<int>(net.b.size()) != n)
        throw StructuralError("network size mismatch in activation step");
    NetworkState out = state;
    for (int i = 0; i < n; ++i) {
        if (state.boundary[i]) continue;
        double y = net.b[i];
        for (int j = 0; j < n; ++j) y += net.w.at(i, j) * state.x[j];
        out.x[i] = activation_value(f, y);
    }
    return out;
}

NetworkState activation_pass(const NetworkState& state, const Assembled& net, Activation f,
                             int passes) {
    if (passes < 1) throw StructuralError("activation pass count must be >= 1");
    NetworkState cur = state;
    for (int l = 0; l < passes; ++l) cur = activation_step(cur, net, f);
    return cur;
}

std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& loss_at,
                                     const std::vector<double>& q, double eps) {
    std::vector<double> grad(q.size(), 0.0);
    std::vector<double> probe = q;
    for (size_t l = 0; l < q.size(); ++l) {
        probe[l] = q[l] + eps;
        double hi = loss_at(probe);
        probe[l] = q[l] - eps;
        double lo = loss_at(probe);
        probe[l] = q[l];
        if (!std::isfinite(hi) || !std::isfinite(lo)) {
            std::ostringstream msg;
            msg << "non-finite loss in numeric gradient at component " << l;
            throw NumericError(msg.str());
        }
        grad[l] = (hi - lo) / (2.0 * eps);
    }
    return grad;
}

std::vector<double> sgd_step(const std::vector<double>& q, const std::vector<double>& grad,
                             double gamma) {
    if (q.size() != grad.size()) throw StructuralError("gradient length mismatch in sgd step");
    std::vector<double> out = q;
    for (size_t l = 0; l < q.size(); ++l) out[l] -= gamma * grad[l];
    return out;
}

}  // namespace critfluct
