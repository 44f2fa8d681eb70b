#pragma once

#include <functional>
#include <vector>

#include "critfluct/errors.hpp"

namespace critfluct {

enum class Activation { sigmoid, relu, piecewise_unit, identity };

// Pointwise activation and its first two derivatives. relu takes subgradient 0
// at the kink; piecewise_unit is y on (0,1) and 0 elsewhere, with derivative 1
// strictly inside the window and 0 outside (both boundary points count as
// outside).
double activation_value(Activation f, double y);
double activation_deriv(Activation f, double y);
double activation_second(Activation f, double y);

struct Loss {
    enum class Kind { mean_squared, cross_entropy, power };
    Kind kind = Kind::mean_squared;
    int exponent = 2;  // power losses only
};

Loss mean_squared_loss();
Loss cross_entropy_loss();
Loss power_loss(int exponent);

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before any log, so
// cross-entropy values and gradients stay finite for saturated outputs.
inline constexpr double kProbClamp = 1e-12;

double loss_value(const Loss& loss, double f, double x2);
double loss_grad_f(const Loss& loss, double f, double x2);
double loss_hess_f(const Loss& loss, double f, double x2);

// Neuron values plus a mask telling which entries are boundary (dataset) and
// which are bulk (trainable-side). Boundary entries are never written by the
// activation dynamics.
struct NetworkState {
    std::vector<double> x;
    std::vector<bool> boundary;

    NetworkState() = default;
    NetworkState(std::vector<double> values, std::vector<bool> boundary_mask);
    int size() const { return static_cast<int>(x.size()); }
    void reset_bulk(double c);
};

struct SquareMatrix {
    int n = 0;
    std::vector<double> a;  // row-major

    explicit SquareMatrix(int n = 0) : n(n), a(static_cast<size_t>(n) * n, 0.0) {}
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Sparse placement of the trainable vector q into weight and bias slots.
// location holds 0/1 selector entries conceptually; here each q component
// carries an explicit target slot, and assemble() scatters q into dense (w, b).
struct TrainableMap {
    struct WeightSlot {
        int i, j;  // w(i,j), signal j -> i
        int l;     // index into q
    };
    struct BiasSlot {
        int i;
        int l;
    };
    std::vector<WeightSlot> weights;
    std::vector<BiasSlot> biases;
    std::vector<double> q;
};

struct Assembled {
    SquareMatrix w;
    std::vector<double> b;
};

// Scatter q into dense weight matrix and bias vector for an n-neuron network.
// Duplicate slots or out-of-range indices are structural errors. Linear in q.
Assembled assemble(const TrainableMap& map, int n);

// One synchronous activation update: every bulk neuron i is replaced by
// f(sum_j w(i,j) x_j + b_i) computed from the previous state; boundary neurons
// pass through untouched.
NetworkState activation_step(const NetworkState& state, const Assembled& net, Activation f);

// L repeated steps. The caller is expected to have set bulk entries to the
// configured initial constant (NetworkState::reset_bulk) beforehand.
NetworkState activation_pass(const NetworkState& state, const Assembled& net, Activation f, int passes);

// Central-difference gradient of loss_at around q, one coordinate at a time.
std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& loss_at,
                                     const std::vector<double>& q, double eps = 1e-6);

// Single-sample descent update q - gamma * grad (mini-batch of one).
std::vector<double> sgd_step(const std::vector<double>& q, const std::vector<double>& grad, double gamma);

}  // namespace critfluct
