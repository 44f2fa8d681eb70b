#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "critfluct/composition.hpp"

namespace critfluct {

// Gaussian input class: label x2, input x1 ~ N(mu, sigma^2), sigma > 0.
struct ClassSpec {
    double x2 = 0.0;
    double mu = 0.0;
    double sigma = 0.25;
};

// The dataset the exponents are derived for: class '-' at (0, 0.25) labeled 0,
// class '+' at (1, 0.25) labeled 1, drawn with equal probability.
ClassSpec minus_class();
ClassSpec plus_class();
std::array<ClassSpec, 2> default_classes();

// Two-neuron network: y = w * x1 + b, output f(y). w and b are the only
// trainables; step_count records how many SGD steps produced them.
struct ToyState {
    double w = 0.0;
    double b = 0.0;
    double gamma = 0.05;
    long long step_count = 0;
};

struct FluctuationSample {
    int class_label = 0;
    double x1 = 0.0;
    double dw = 0.0;  // always exactly x1 * db
    double db = 0.0;
    double y = 0.0;  // pre-activation at the frozen state
};

struct EquilibriumCriterion {
    long long window = 10000;     // >= 100
    double rel_tol = 1e-3;        // in (0, 1)
    long long max_steps = 10000000;
};

struct TracePoint {
    long long step;
    double w, b;
};

struct TrainResult {
    ToyState state;       // (w, b) are the final-window means
    bool converged = false;
    std::vector<TracePoint> trace;
};

double sample_input(const ClassSpec& cls, std::mt19937_64& rng);

// Fair class flip plus input draw; returns (class index, x1).
std::pair<int, double> draw_labeled(const std::array<ClassSpec, 2>& classes, std::mt19937_64& rng);

// (y, f(y)) at the given state.
std::pair<double, double> toy_forward(double x1, const ToyState& state, Activation f);

struct ToyGradient {
    double dw = 0.0;  // dH/dw, exactly x1 * db
    double db = 0.0;  // dH/db = dH/dy
};

// Analytic loss gradient in (w, b) for one sample. Non-finite results raise a
// numeric error naming the inputs.
ToyGradient toy_gradient(double x1, double x2, const ToyState& state, const Composition& comp);

// Online SGD over the class mixture until the window-averaged (w, b) moves by
// less than rel_tol (relative, euclidean) between consecutive windows, or
// max_steps is exhausted (flagged, not an error). |w| or |b| beyond 1e6 raises
// DivergenceError. The trace is decimated to at most ~5000 points.
TrainResult train_to_equilibrium(const ToyState& initial, const Composition& comp,
                                 const std::array<ClassSpec, 2>& classes,
                                 const EquilibriumCriterion& crit, std::uint64_t seed);

// Jump samples (dw, db) = -gamma * grad H at the frozen state, one class.
// Sampling is chunked with per-chunk seeds derived from `seed`, so the result
// is byte-identical for any worker count; workers > 1 only adds threads.
std::vector<FluctuationSample> collect_jumps(const ToyState& state, const Composition& comp,
                                             const ClassSpec& cls, long long count,
                                             std::uint64_t seed, int workers = 1);

// Fraction of fresh labeled draws classified correctly. Sigmoid pairings
// predict '+' when f(y) > 0.5; relu-family pairings threshold y at the value
// it takes on the inter-class midpoint input x1 = (mu- + mu+) / 2.
double classification_accuracy(const ToyState& state, const Composition& comp,
                               const std::array<ClassSpec, 2>& classes, long long draws,
                               std::uint64_t seed);

// Stream-splitting helper: statistically independent sub-seed for (seed, tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace critfluct
