"""Bergman trees, weight characteristics and sparse bounds on the unit ball."""

from ._bergman import (
    NumericalError,
    ValidationError,
    bergman_distance,
    involution,
    luxembourg_average,
    model_suite,
    radial_projection_norm,
    run_cli,
    tent_contains,
    tree_json,
    tree_summary,
    young_bp_check,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "bergman_distance",
    "involution",
    "luxembourg_average",
    "model_suite",
    "radial_projection_norm",
    "run_cli",
    "tent_contains",
    "tree_json",
    "tree_summary",
    "young_bp_check",
]
