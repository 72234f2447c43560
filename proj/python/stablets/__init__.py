"""Simulation of Thompson sampling and stable Thompson sampling on Gaussian bandits."""

from stablets._core import (
    IoError,
    ParseError,
    __version__,
    expected_pulls_bound,
    gamma_value,
    ks_statistic,
    lil_envelope,
    mills_ratio_bounds,
    normal_cdf,
    normal_quantile,
    reproduce_figure,
    run_episode,
    selection_probability,
    simulate,
    verify_theory,
)

__all__ = [
    "IoError",
    "ParseError",
    "__version__",
    "expected_pulls_bound",
    "gamma_value",
    "ks_statistic",
    "lil_envelope",
    "mills_ratio_bounds",
    "normal_cdf",
    "normal_quantile",
    "reproduce_figure",
    "run_episode",
    "selection_probability",
    "simulate",
    "verify_theory",
]
