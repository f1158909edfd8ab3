"""Numerical laboratory for minimax redundancy bounds."""

from .bounds import (
    RadiusBounds,
    envelope_radius_lower,
    envelope_radius_upper,
    finite_alphabet_radius_bounds,
    hazard_integral,
    u_star_sandwich,
)
from .metric_entropy import (
    MetricEntropyBounds,
    admissibility,
    epsilon_star,
    haussler_opper_lower,
    log_ball_volume,
    metric_entropy_bounds,
)
from .oracle import capacity_bounds, exact_radius_small, projection_radius_check
from .regime import (
    KSchedule,
    RegimeReport,
    RegimeRow,
    classify_regime,
    parse_k_schedule,
)

__all__ = [
    "KSchedule",
    "MetricEntropyBounds",
    "RadiusBounds",
    "RegimeReport",
    "RegimeRow",
    "admissibility",
    "capacity_bounds",
    "classify_regime",
    "envelope_radius_lower",
    "envelope_radius_upper",
    "epsilon_star",
    "exact_radius_small",
    "finite_alphabet_radius_bounds",
    "hazard_integral",
    "haussler_opper_lower",
    "log_ball_volume",
    "metric_entropy_bounds",
    "parse_k_schedule",
    "projection_radius_check",
    "u_star_sandwich",
]
