"""Python access to the zkblab kernels, solver and rate fits."""

from ._core import (
    ConfigError,
    Grid,
    HypothesisError,
    KernelValue,
    ZkbError,
    decay_bound,
    eval_M_functional,
    eval_U,
    eval_U_grid,
    eval_U_minus_V,
    eval_V,
    eval_Vstar,
    fit_decay_rate,
    initial_data,
    linear_propagate,
    lower_bound_constant,
    remainder_bound,
    solve,
    theory_slopes,
)

__all__ = [
    "ConfigError",
    "Grid",
    "HypothesisError",
    "KernelValue",
    "ZkbError",
    "decay_bound",
    "eval_M_functional",
    "eval_U",
    "eval_U_grid",
    "eval_U_minus_V",
    "eval_V",
    "eval_Vstar",
    "fit_decay_rate",
    "initial_data",
    "linear_propagate",
    "lower_bound_constant",
    "remainder_bound",
    "solve",
    "theory_slopes",
]
