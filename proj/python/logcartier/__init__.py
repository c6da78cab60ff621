"""Exact log differential calculus over toric charts in characteristic p."""

from ._core import (
    Chart,
    Connection,
    Higgs,
    LogCartierError,
    cartier_iso_check,
    cartier_transform,
    constant_connection,
    element_str,
    in_B,
    inverse_cartier_transform,
    is_integrable,
    load_chart,
    load_connection,
    load_higgs,
    minimal_elements,
    nilpotence_level,
    p_curvature,
    quasi_iso_check,
    run_cli,
)

__all__ = [
    "Chart",
    "Connection",
    "Higgs",
    "LogCartierError",
    "cartier_iso_check",
    "cartier_transform",
    "constant_connection",
    "element_str",
    "in_B",
    "inverse_cartier_transform",
    "is_integrable",
    "load_chart",
    "load_connection",
    "load_higgs",
    "minimal_elements",
    "nilpotence_level",
    "p_curvature",
    "quasi_iso_check",
    "run_cli",
]
