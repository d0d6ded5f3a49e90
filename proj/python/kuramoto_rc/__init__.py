"""Kuramoto oscillator reservoir computing."""

from ._core import (
    Config,
    Network,
    TimeSeries,
    complete_graph,
    erdos_renyi,
    kuramoto_r,
    lorenz_series,
    mackey_glass_series,
    multisine_series,
    order_sweep,
    run,
    solve_ridge,
    task1_target,
    task2_target,
    variance_r,
)

__all__ = [
    "Config",
    "Network",
    "TimeSeries",
    "complete_graph",
    "erdos_renyi",
    "kuramoto_r",
    "lorenz_series",
    "mackey_glass_series",
    "multisine_series",
    "order_sweep",
    "run",
    "solve_ridge",
    "task1_target",
    "task2_target",
    "variance_r",
]
