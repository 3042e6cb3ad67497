"""Routing over lazily sampled random subgraphs, with probe accounting.

Thin wrapper around the compiled core. The main entry points are
:class:`Topology`, :func:`route`, :func:`run_sweep` and the validators
:func:`validate_lower_bound` / :func:`count_ball_paths`.
"""

from ._core import (  # noqa: F401
    CapacityError,
    ConfigError,
    EncodingError,
    FamilyError,
    FitError,
    InsufficientDataError,
    LocalityError,
    Topology,
    component_size,
    count_ball_paths,
    edge_open,
    fit_scaling,
    geometric_grid,
    ground_truth_connected,
    mix64,
    route,
    run_acceptance,
    run_sweep,
    validate_lower_bound,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "EncodingError",
    "FamilyError",
    "FitError",
    "InsufficientDataError",
    "LocalityError",
    "Topology",
    "component_size",
    "count_ball_paths",
    "edge_open",
    "fit_scaling",
    "geometric_grid",
    "ground_truth_connected",
    "mix64",
    "route",
    "run_acceptance",
    "run_sweep",
    "validate_lower_bound",
]
