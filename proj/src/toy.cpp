#include "critfluct/toy.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "critfluct/duality.hpp"

namespace critfluct {

ClassSpec minus_class() { return {0.0, 0.0, 0.25}; }
ClassSpec plus_class() { return {1.0, 1.0, 0.25}; }
std::array<ClassSpec, 2> default_classes() { return {minus_class(), plus_class()}; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 over the combined word; cheap and well mixed.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_input(const ClassSpec& cls, std::mt19937_64& rng) {
    if (!(cls.sigma > 0.0)) throw StructuralError("class sigma must be positive");
    std::normal_distribution<double> n(cls.mu, cls.sigma);
    return n(rng);
}

std::pair<int, double> draw_labeled(const std::array<ClassSpec, 2>& classes, std::mt19937_64& rng) {
    std::bernoulli_distribution flip(0.5);
    int cls = flip(rng) ? 1 : 0;
    return {cls, sample_input(classes[cls], rng)};
}

std::pair<double, double> toy_forward(double x1, const ToyState& state, Activation f) {
    double y = state.w * x1 + state.b;
    return {y, activation_value(f, y)};
}

ToyGradient toy_gradient(double x1, double x2, const ToyState& state, const Composition& comp) {
    double y = state.w * x1 + state.b;
    double f = activation_value(comp.activation, y);
    double dHdy = loss_grad_f(comp.loss, f, x2) * activation_deriv(comp.activation, y);
    ToyGradient g;
    g.db = dHdy;
    g.dw = x1 * dHdy;
    if (!std::isfinite(g.dw) || !std::isfinite(g.db)) {
        std::ostringstream msg;
        msg << "non-finite gradient for " << comp.id << " at x1=" << x1 << " x2=" << x2
            << " w=" << state.w << " b=" << state.b;
        throw NumericError(msg.str());
    }
    return g;
}

namespace {

constexpr double kDivergenceGuard = 1e6;

void check_guard(const ToyState& st, const Composition& comp) {
    if (std::abs(st.w) > kDivergenceGuard || std::abs(st.b) > kDivergenceGuard) {
        std::ostringstream msg;
        msg << "trainables diverged for composition " << comp.id << " at gamma=" << st.gamma
            << " (w=" << st.w << ", b=" << st.b << ")";
        throw DivergenceError(comp.id, st.gamma, msg.str());
    }
}

}  // namespace

TrainResult train_to_equilibrium(const ToyState& initial, const Composition& comp,
                                 const std::array<ClassSpec, 2>& classes,
                                 const EquilibriumCriterion& crit, std::uint64_t seed) {
    if (crit.window < 100) throw StructuralError("equilibrium window must be >= 100");
    if (!(crit.rel_tol > 0.0 && crit.rel_tol < 1.0))
        throw StructuralError("equilibrium rel_tol must lie in (0, 1)");
    if (crit.max_steps < 2 * crit.window)
        throw StructuralError("max_steps must cover at least two windows");

    std::mt19937_64 rng(derive_seed(seed, 0x7261696eULL));
    TrainResult result;
    ToyState st = initial;
    st.step_count = 0;

    long long trace_stride = std::max<long long>(1, crit.max_steps / 5000);
    double acc_w = 0.0, acc_b = 0.0;
    double prev_w = 0.0, prev_b = 0.0;
    bool have_prev = false;

    result.trace.push_back({0, st.w, st.b});
    for (long long step = 1; step <= crit.max_steps; ++step) {
        auto [cls, x1] = draw_labeled(classes, rng);
        ToyGradient g = toy_gradient(x1, classes[cls].x2, st, comp);
        st.w -= st.gamma * g.dw;
        st.b -= st.gamma * g.db;
        check_guard(st, comp);
        acc_w += st.w;
        acc_b += st.b;
        if (step % trace_stride == 0) result.trace.push_back({step, st.w, st.b});
        if (step % crit.window == 0) {
            double mean_w = acc_w / crit.window;
            double mean_b = acc_b / crit.window;
            acc_w = acc_b = 0.0;
            if (have_prev) {
                double dn = std::hypot(mean_w - prev_w, mean_b - prev_b);
                double scale = std::max(std::hypot(mean_w, mean_b), 1e-12);
                if (dn / scale < crit.rel_tol) {
                    result.state = {mean_w, mean_b, st.gamma, step};
                    result.converged = true;
                    result.trace.push_back({step, st.w, st.b});
                    return result;
                }
            }
            prev_w = mean_w;
            prev_b = mean_b;
            have_prev = true;
        }
    }
    // Window budget exhausted: hand back the last window mean, flagged.
    result.state = {have_prev ? prev_w : st.w, have_prev ? prev_b : st.b, st.gamma, crit.max_steps};
    result.converged = false;
    return result;
}

namespace {

constexpr long long kCollectChunk = 1 << 16;

void collect_chunk(const ToyState& state, const Composition& comp, const ClassSpec& cls,
                   std::uint64_t seed, long long chunk_index, long long n,
                   FluctuationSample* out) {
    std::mt19937_64 rng(derive_seed(seed, 0xc0111ec7ULL + static_cast<std::uint64_t>(chunk_index)));
    std::normal_distribution<double> draw(cls.mu, cls.sigma);
    int label = static_cast<int>(cls.x2 + 0.5);
    for (long long i = 0; i < n; ++i) {
        double x1 = draw(rng);
        ToyGradient g = toy_gradient(x1, cls.x2, state, comp);
        FluctuationSample s;
        s.class_label = label;
        s.x1 = x1;
        s.db = -state.gamma * g.db;
        s.dw = x1 * s.db;  // kept exact, not recomputed through the gradient
        s.y = state.w * x1 + state.b;
        out[i] = s;
    }
}

}  // namespace

std::vector<FluctuationSample> collect_jumps(const ToyState& state, const Composition& comp,
                                             const ClassSpec& cls, long long count,
                                             std::uint64_t seed, int workers) {
    if (count < 0) throw StructuralError("jump count must be >= 0");
    if (!(cls.sigma > 0.0)) throw StructuralError("class sigma must be positive");
    std::vector<FluctuationSample> samples(count);
    long long chunks = (count + kCollectChunk - 1) / kCollectChunk;
    auto run_range = [&](long long c0, long long c1) {
        for (long long c = c0; c < c1; ++c) {
            long long begin = c * kCollectChunk;
            long long n = std::min(kCollectChunk, count - begin);
            collect_chunk(state, comp, cls, seed, c, n, samples.data() + begin);
        }
    };
    int nw = std::max(1, workers);
    if (nw == 1 || chunks <= 1) {
        run_range(0, chunks);
    } else {
        nw = static_cast<int>(std::min<long long>(nw, chunks));
        std::vector<std::thread> pool;
        long long per = (chunks + nw - 1) / nw;
        for (int t = 0; t < nw; ++t) {
            long long c0 = t * per;
            long long c1 = std::min(chunks, c0 + per);
            if (c0 >= c1) break;
            pool.emplace_back(run_range, c0, c1);
        }
        for (auto& th : pool) th.join();
    }
    return samples;
}

double classification_accuracy(const ToyState& state, const Composition& comp,
                               const std::array<ClassSpec, 2>& classes, long long draws,
                               std::uint64_t seed) {
    if (draws <= 0) throw StructuralError("accuracy draws must be positive");
    std::mt19937_64 rng(derive_seed(seed, 0xacc7e57ULL));
    bool relu_family =
        comp.activation == Activation::relu || comp.activation == Activation::piecewise_unit ||
        comp.activation == Activation::identity;
    double x_mid = 0.5 * (classes[0].mu + classes[1].mu);
    double y_threshold = state.w * x_mid + state.b;
    double sign = state.w >= 0.0 ? 1.0 : -1.0;
    long long correct = 0;
    for (long long i = 0; i < draws; ++i) {
        auto [cls, x1] = draw_labeled(classes, rng);
        auto [y, f] = toy_forward(x1, state, comp.activation);
        bool plus = relu_family ? sign * (y - y_threshold) > 0.0 : f > 0.5;
        if (plus == (cls == 1)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(draws);
}

}  // namespace critfluct
