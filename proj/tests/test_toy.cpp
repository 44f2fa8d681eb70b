#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "critfluct/toy.hpp"

using namespace critfluct;

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

TEST_CASE("class catalogue") {
    ClassSpec m = minus_class(), p = plus_class();
    CHECK(m.x2 == 0.0);
    CHECK(m.mu == 0.0);
    CHECK(m.sigma == 0.25);
    CHECK(p.x2 == 1.0);
    CHECK(p.mu == 1.0);
    CHECK(p.sigma == 0.25);
    auto both = default_classes();
    CHECK(both[0].x2 == 0.0);
    CHECK(both[1].x2 == 1.0);
}

TEST_CASE("input sampling matches the class law") {
    std::mt19937_64 rng(71);

    SUBCASE("vanishing width concentrates on the mean") {
        ClassSpec tight{0.0, 0.37, 1e-12};
        for (int i = 0; i < 10; ++i)
            CHECK(sample_input(tight, rng) == doctest::Approx(0.37).epsilon(1e-9));
        ClassSpec bad{0.0, 0.0, 0.0};
        CHECK_THROWS_AS(sample_input(bad, rng), StructuralError);
    }

    SUBCASE("moments of a million draws") {
        ClassSpec m = minus_class();
        const long long n = 1000000;
        double s1 = 0.0, s2 = 0.0;
        for (long long i = 0; i < n; ++i) {
            double x = sample_input(m, rng);
            s1 += x;
            s2 += x * x;
        }
        double mean = s1 / n;
        double sd = std::sqrt(s2 / n - mean * mean);
        CHECK(std::abs(mean - 0.0) < 0.001);
        CHECK(std::abs(sd - 0.25) < 0.002);
    }

    SUBCASE("labels are a fair coin") {
        auto classes = default_classes();
        const long long n = 200000;
        long long plus = 0, misplaced = 0;
        for (long long i = 0; i < n; ++i) {
            auto [cls, x1] = draw_labeled(classes, rng);
            plus += cls;
            // plus-class draws cluster near 1, minus near 0; 8 sigma apart
            if (cls == 1 ? x1 <= -1.0 : x1 >= 2.0) ++misplaced;
        }
        CHECK(misplaced == 0);
        double frac = static_cast<double>(plus) / n;
        CHECK(std::abs(frac - 0.5) < 0.005);  // ~4.5 standard errors
    }
}

TEST_CASE("forward map spot values") {
    auto [y1, f1] = toy_forward(12.3, ToyState{0.0, 0.0, 0.05, 0}, Activation::sigmoid);
    CHECK(y1 == 0.0);
    CHECK(f1 == 0.5);
    auto [y2, f2] = toy_forward(1.0, ToyState{2.0, -1.0, 0.05, 0}, Activation::relu);
    CHECK(y2 == 1.0);
    CHECK(f2 == 1.0);
    auto [y3, f3] = toy_forward(-0.3, ToyState{1.0, 0.0, 0.05, 0}, Activation::relu);
    CHECK(y3 == -0.3);
    CHECK(f3 == 0.0);
}

TEST_CASE("training with zero rate converges on the first comparison") {
    Composition comp = composition_by_id("sigmoid_mse");
    EquilibriumCriterion crit{100, 0.5, 1000};
    TrainResult r =
        train_to_equilibrium(ToyState{0.3, -0.2, 0.0, 0}, comp, default_classes(), crit, 9);
    CHECK(r.converged);
    CHECK(r.state.step_count == 200);  // two windows to compare
    CHECK(r.state.w == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(r.state.b == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("criterion validation") {
    Composition comp = composition_by_id("sigmoid_mse");
    auto classes = default_classes();
    ToyState st{0.0, 0.0, 0.05, 0};
    CHECK_THROWS_AS(train_to_equilibrium(st, comp, classes, {99, 1e-3, 10000}, 1), StructuralError);
    CHECK_THROWS_AS(train_to_equilibrium(st, comp, classes, {100, 0.0, 10000}, 1), StructuralError);
    CHECK_THROWS_AS(train_to_equilibrium(st, comp, classes, {100, 1.0, 10000}, 1), StructuralError);
    CHECK_THROWS_AS(train_to_equilibrium(st, comp, classes, {1000, 1e-3, 1500}, 1), StructuralError);
}

TEST_CASE("runaway rate raises a divergence error naming the run") {
    Composition comp = composition_by_id("sigmoid_mse");
    EquilibriumCriterion crit{100, 1e-3, 10000};
    try {
        train_to_equilibrium(ToyState{0.0, 0.0, 1e8, 0}, comp, default_classes(), crit, 3);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.composition == "sigmoid_mse");
        CHECK(e.gamma == 1e8);
    }
}

TEST_CASE("trained sigmoid splits the classes at the midpoint input") {
    Composition comp = composition_by_id("sigmoid_mse");
    EquilibriumCriterion crit{100000, 5e-4, 30000000};
    TrainResult r =
        train_to_equilibrium(ToyState{0.0, 0.0, 0.05, 0}, comp, default_classes(), crit, 42);
    CHECK(r.converged);
    // classes sit symmetric about x1 = 0.5, so the learned threshold does too
    CHECK(std::abs(0.5 * r.state.w + r.state.b) < 0.1);
    CHECK(r.state.w > 1.0);

    SUBCASE("drift at the fixed point stays under the stationarity budget") {
        EquilibriumCriterion hold{100000, 1e-9, 200000};
        TrainResult h = train_to_equilibrium(r.state, comp, default_classes(), hold, 1042);
        CHECK_FALSE(h.converged);  // tolerance chosen unreachably small
        double per_step_w = std::abs(h.state.w - r.state.w) / 200000.0;
        double per_step_b = std::abs(h.state.b - r.state.b) / 200000.0;
        CHECK(per_step_w < 1e-3 * 0.05);
        CHECK(per_step_b < 1e-3 * 0.05);
    }

    SUBCASE("trace brackets the run") {
        CHECK(r.trace.size() >= 2);
        CHECK(r.trace.front().step == 0);
        CHECK(r.trace.front().w == 0.0);
        CHECK(r.trace.back().step == r.state.step_count);
        CHECK(r.trace.size() <= 5003);
    }
}

TEST_CASE("jump samples carry the exact chain-rule product") {
    Composition comp = composition_by_id("sigmoid_mse");
    ToyState st{16.0, -8.0, 0.05, 0};
    auto samples = collect_jumps(st, comp, minus_class(), 50000, 7);
    CHECK(samples.size() == 50000);
    for (const auto& s : samples) {
        CHECK(s.dw == s.x1 * s.db);  // bitwise, not approximate
        CHECK(s.y == st.w * s.x1 + st.b);
        CHECK(s.class_label == 0);
    }
}

TEST_CASE("single jump request returns a single sample") {
    Composition comp = composition_by_id("sigmoid_mse");
    ToyState st{1.0, 0.0, 0.05, 0};
    auto one = collect_jumps(st, comp, plus_class(), 1, 7);
    CHECK(one.size() == 1);
    CHECK(one[0].class_label == 1);
    CHECK(collect_jumps(st, comp, plus_class(), 0, 7).empty());
    CHECK_THROWS_AS(collect_jumps(st, comp, plus_class(), -1, 7), StructuralError);
}

namespace {

bool same_samples(const std::vector<FluctuationSample>& a,
                  const std::vector<FluctuationSample>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        // bitwise field equality, no tolerance anywhere
        if (a[i].class_label != b[i].class_label || a[i].x1 != b[i].x1 || a[i].dw != b[i].dw ||
            a[i].db != b[i].db || a[i].y != b[i].y)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("collection is bit-identical across worker counts") {
    Composition comp = composition_by_id("sigmoid_ce");
    ToyState st{16.0, -8.0, 0.05, 0};
    auto a = collect_jumps(st, comp, plus_class(), 200000, 99, 1);
    auto b = collect_jumps(st, comp, plus_class(), 200000, 99, 4);
    auto c = collect_jumps(st, comp, plus_class(), 200000, 99, 1);
    CHECK(same_samples(a, b));
    CHECK(same_samples(a, c));
    auto d = collect_jumps(st, comp, plus_class(), 200000, 100, 1);
    CHECK_FALSE(same_samples(a, d));
}

TEST_CASE("dead-region jump fraction equals the Gaussian mass below the kink") {
    // relu at (w, b) = (1, -0.1): samples with x1 < 0.1 produce exactly zero
    // jumps, and the minus class puts Phi(0.4) of its mass there.
    Composition comp = composition_by_id("relu_p2");
    ToyState st{1.0, -0.1, 0.05, 0};
    auto samples = collect_jumps(st, comp, minus_class(), 200000, 13);
    long long zeros = 0;
    for (const auto& s : samples)
        if (s.dw == 0.0 && s.db == 0.0) ++zeros;
    double frac = static_cast<double>(zeros) / samples.size();
    double expected = normal_cdf(0.4);
    CHECK(frac > 0.5);
    CHECK(std::abs(frac - expected) < 0.005);
}

TEST_CASE("seed derivation splits streams") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    // tag spacing used by chunked collection stays collision-free locally
    for (std::uint64_t t = 0; t < 64; ++t)
        CHECK(derive_seed(42, t) != derive_seed(42, t + 1));
}

TEST_CASE("accuracy thresholds by output kind") {
    auto classes = default_classes();

    SUBCASE("sigmoid predicts by the half level") {
        Composition comp = composition_by_id("sigmoid_mse");
        ToyState st{100.0, -50.0, 0.05, 0};  // f > 1/2 exactly when x1 > 1/2
        double acc = classification_accuracy(st, comp, classes, 100000, 5);
        CHECK(std::abs(acc - normal_cdf(2.0)) < 0.003);
    }

    SUBCASE("relu family thresholds the preactivation at the midpoint") {
        Composition comp = composition_by_id("relu_p2");
        ToyState st{1.0, -0.1, 0.05, 0};
        double acc = classification_accuracy(st, comp, classes, 100000, 5);
        CHECK(std::abs(acc - normal_cdf(2.0)) < 0.003);
    }

    SUBCASE("negative weight flips the decision side") {
        Composition lin{"lin_mse", Activation::identity, mean_squared_loss(), {}, {}};
        ToyState st{-1.0, 0.6, 0.05, 0};
        double acc = classification_accuracy(st, lin, classes, 100000, 5);
        CHECK(std::abs(acc - normal_cdf(2.0)) < 0.003);
    }

    SUBCASE("draw count must be positive") {
        Composition comp = composition_by_id("relu_p2");
        CHECK_THROWS_AS(classification_accuracy(ToyState{}, comp, classes, 0, 5), StructuralError);
    }
}
