"""Smoke test for the Python surface: every exposed call, tiny workloads."""

import math
import random

import critfluct as cf


def expect_raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return
    raise AssertionError(f"expected {exc.__name__} from {fn}")


def main():
    ids = cf.composition_ids()
    assert ids == ["sigmoid_mse", "sigmoid_ce", "relu_p2", "relu_p4", "piecewise_ce"], ids

    pred = cf.predicted_exponents("relu_p4")
    assert abs(pred["minus"] - 2.0 / 3.0) < 1e-12
    assert pred["plus"] == pred["minus"]
    assert cf.predicted_exponents("sigmoid_mse") == {"minus": 1.0, "plus": 1.0}
    expect_raises(cf.ConfigError, cf.composition_value, "tanh_mse", 0.0, 0.0)

    # H(y) parts: sigmoid(0) = 1/2 against target 0 under squared loss
    assert abs(cf.composition_value("sigmoid_mse", 0.0, 0.0) - 0.25) < 1e-12

    a, b = cf.rotate(math.pi / 2, 0.3, -0.7)
    assert abs(a + 0.7) < 1e-12 and abs(b + 0.3) < 1e-12

    # a vanishing learning rate freezes training, which converges immediately
    r = cf.train_to_equilibrium("sigmoid_mse", 0.3, -0.2, 0.0, 1,
                                window=100, rel_tol=1e-3, max_steps=1000)
    assert r["converged"] and abs(r["w"] - 0.3) < 1e-9

    jumps = cf.collect_jumps("sigmoid_mse", 16.0, -8.0, 0.05, "minus", 5000, 3)
    assert len(jumps["dw"]) == 5000
    est = cf.estimate_theta(jumps["dw"], jumps["db"])
    assert est["used"] == 5000
    assert est["ratio"] < 0.2  # jumps hug a single principal axis
    assert 0.0 <= est["theta"] < math.pi

    rate = cf.q1p_rate("sigmoid_mse", math.pi / 2, 16.0, -8.0, 0.05, 0.5, 0.0)
    assert rate != 0.0 and math.isfinite(rate)

    # analysis chain on an exact inverse-CDF power-law sample
    rng = random.Random(5)
    lo, hi, k = 1e-3, 1e-1, 1.5
    e = 1.0 - k
    mags = [(lo ** e + rng.random() * (hi ** e - lo ** e)) ** (1.0 / e)
            for _ in range(200000)]
    hist = cf.log_bin(mags, 40, lo, hi)
    assert hist["included"] == 200000 and len(hist["counts"]) == 40
    fit = cf.fit_power_law(mags, 40, lo, hi)
    assert abs(fit["k"] - k) < 0.1, fit
    wlo, whi = cf.default_fit_window(mags, 40)
    assert 0.0 < wlo < whi
    base, scaled = cf.scaling_exponent_invariance(mags, 7.0, 40, lo, hi)
    assert abs(base["k"] - scaled["k"]) < 0.05
    assert abs(cf.moment([1.0, -1.0, 2.0, -2.0], 2) - 2.5) < 1e-12
    grid = [i / 200.0 for i in range(201)]
    tri = [2.0 * g for g in grid]
    ks = cf.ks_distance([math.sqrt(rng.random()) for _ in range(20000)], grid, tri)
    assert ks < 0.02, ks
    expect_raises(cf.InsufficientDataError, cf.moment, [], 2)

    assert cf.expint_approx(20.0) == math.exp(20.0) / 20.0
    expect_raises(cf.DomainError, cf.expint_approx, 0.5)
    val, err_est = cf.expint_quadrature(1.0, 2.0)
    assert val > 0.0 and err_est >= 0.0
    expect_raises(cf.DomainError, cf.expint_quadrature, -1.0, 1.0)

    res = cf.verify_appendix([10.0])
    assert res["all_ok"] is True and len(res["rows"]) == 2

    # one tiny but complete experiment through the JSON boundary
    cfg = cf.default_config("sigmoid_mse")
    assert cfg["fit_window"]["minus"] == [1e-10, 1e-6]
    cfg["seed"] = 5
    cfg["jump_count"] = 20000
    cfg["accuracy_draws"] = 2000
    rep = cf.run_experiment(cfg)
    assert rep["composition"] == "sigmoid_mse"
    assert rep["converged"] is True
    assert rep["accuracy"] > 0.9
    assert rep["classes"]["minus"]["k_predicted"] == 1.0
    assert math.isfinite(rep["classes"]["plus"]["fit"]["k"])
    rep2 = cf.run_experiment(cfg)
    assert rep == rep2  # fully deterministic pipeline

    print("smoke ok")


if __name__ == "__main__":
    main()
