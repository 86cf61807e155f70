"""Polar-split geometric flow simulator."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ConfigError,
    FluxSpec,
    NewtonStagnation,
    PeriodicGrid,
    SolverError,
)

__all__ = [
    "ConfigError",
    "FluxSpec",
    "NewtonStagnation",
    "PeriodicGrid",
    "SolverError",
    "config_hash",
    "contraction_horizon",
    "ellipse",
    "evolve",
    "evolve_coupled",
    "flux_bound_H",
    "galilean_shift",
    "heat_kernel_convolve",
    "heat_propagate",
    "kernel_gradient_l1",
    "l1_norm",
    "mean",
    "picard_solve",
    "reconstruct",
    "run_verify",
    "solve_cell",
    "step",
    "sup_norm",
]
