"""Two-neuron fluctuation criticality toolkit.

Thin Python surface over the C++ core. Heavy results (experiment reports,
appendix tables) cross the boundary as JSON text; the wrappers here decode
them so callers get plain dicts.
"""

import json as _json

from ._core import (
    ConfigError,
    DivergenceError,
    DomainError,
    EstimationError,
    InsufficientDataError,
    MultiBranchError,
    ToyState,
    collect_jumps,
    composition_ids,
    composition_value,
    default_fit_window,
    estimate_theta,
    expint_approx,
    expint_quadrature,
    fit_power_law,
    ks_distance,
    log_bin,
    moment,
    predicted_exponents,
    q1p_rate,
    rotate,
    scaling_exponent_invariance,
    train_to_equilibrium,
)
from ._core import default_config as _default_config_json
from ._core import run_experiment as _run_experiment_json
from ._core import verify_appendix as _verify_appendix_json

__all__ = [
    "ConfigError",
    "DivergenceError",
    "DomainError",
    "EstimationError",
    "InsufficientDataError",
    "MultiBranchError",
    "ToyState",
    "collect_jumps",
    "composition_ids",
    "composition_value",
    "default_config",
    "default_fit_window",
    "estimate_theta",
    "expint_approx",
    "expint_quadrature",
    "fit_power_law",
    "ks_distance",
    "log_bin",
    "moment",
    "predicted_exponents",
    "q1p_rate",
    "rotate",
    "run_experiment",
    "scaling_exponent_invariance",
    "train_to_equilibrium",
    "verify_appendix",
]


def default_config(composition):
    """Canonical experiment config for one activation/loss pairing, as a dict."""
    return _json.loads(_default_config_json(composition))


def run_experiment(config):
    """Run one experiment; accepts a config dict and returns the report dict."""
    return _json.loads(_run_experiment_json(_json.dumps(config)))


def verify_appendix(xs):
    """Check the asymptotic integral approximation at each |x| >= 10."""
    return _json.loads(_verify_appendix_json(list(xs)))
