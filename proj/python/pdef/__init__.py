"""Density evolution, particle and unscented filters for scalar state-space models."""

from ._pdef import (
    FilterError,
    cc_weights,
    diff_matrix,
    expm,
    gauss_lobatto_nodes,
    gaussian_quantile_points,
    run_experiment,
    systematic_resample,
    trajectory,
)

__all__ = [
    "FilterError",
    "cc_weights",
    "diff_matrix",
    "expm",
    "gauss_lobatto_nodes",
    "gaussian_quantile_points",
    "run_experiment",
    "systematic_resample",
    "trajectory",
]
