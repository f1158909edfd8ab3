"""Minimax redundancy bounds for finite alphabets and envelope classes.

All results are total (not per symbol) redundancies in bits. The lower
bounds are evaluated in their asymptotic form without the vanishing
inflation factors.
"""

import math
from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import trapezoid

from ..distributions import Envelope, HazardFunction, quantile_u_star
from ..exceptions import DomainError
from ..utils import logger

LOG2_E = math.log2(math.e)
FINITE_ALPHABET_SLACK = 2.0
"""Additive constant (bits) on both sides of the finite alphabet sandwich."""
UPPER_SCAN_WINDOW = 64
QUADRATURE_PANELS = 4096
MAX_KNOTS = 1 << 16


class RadiusBounds(BaseModel):
    """Lower and upper bound on a minimax redundancy."""

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=1, description="Block length.")]
    lower_bits: Annotated[float, Field(ge=0, description="Lower bound.")]
    upper_bits: Annotated[float, Field(ge=0, description="Upper bound.")]
    lower_method: Annotated[str, Field(description="Origin of the lower bound.")]
    upper_method: Annotated[str, Field(description="Origin of the upper bound.")]


def finite_alphabet_radius_bounds(k: int, n: int) -> RadiusBounds:
    """``((k-1)/2) log2 n`` plus or minus two bits."""
    if k < 1 or n < 1:
        raise DomainError("k and n have to be positive")
    leading = (k - 1) / 2 * math.log2(n)
    return RadiusBounds(
        n=n,
        lower_bits=max(0.0, leading - FINITE_ALPHABET_SLACK),
        upper_bits=leading + FINITE_ALPHABET_SLACK,
        lower_method="finite-alphabet",
        upper_method="finite-alphabet",
    )


def envelope_radius_upper(envelope: Envelope, n: int) -> float:
    """``min_u [n F(u) log2 e + ((u-1)/2) log2 n] + 2`` over integers
    ``1 <= u <= u* + 64``, with ``F`` the envelope probability tail."""
    u_star = quantile_u_star(envelope, n)
    candidates = np.arange(1, u_star + UPPER_SCAN_WINDOW + 1, dtype=np.int64)
    tail = envelope.probability.pmf.survival_array(candidates)
    objective = n * tail * LOG2_E + (candidates - 1) / 2 * math.log2(n)
    best = int(np.argmin(objective))
    logger.debug("Upper bound minimizer u=%i (u*=%i)", candidates[best], u_star)
    if best == len(candidates) - 1:
        logger.warning("Upper bound minimizer sits at the end of the scan")
    return float(objective[best]) + 2.0


def hazard_integral(hazard: HazardFunction, log_upper: float) -> float:
    """``(1/2) int_0^{log_upper} U(e^y) dy`` in nats.

    ``U(e^y)`` is linear in ``y`` between consecutive hazard values, with
    every knot on the grid the trapezoidal rule is exact.
    """
    if log_upper <= 0:
        return 0.0
    grid = np.linspace(0.0, log_upper, QUADRATURE_PANELS + 1)
    last = int(hazard.integer_bracket(np.asarray([log_upper]))[0])
    if last <= MAX_KNOTS:
        knots = hazard.knots(log_upper)
        grid = np.unique(np.concatenate([grid, knots[knots > 0]]))
    return 0.5 * float(trapezoid(hazard.of_log(grid), grid))


def envelope_radius_lower(envelope: Envelope, n: int) -> float:
    """``log2(e) int_1^n U(x) / (2x) dx`` in bits."""
    if n < 1:
        raise DomainError(f"n has to be positive, got {n}")
    if n == 1:
        return 0.0
    return LOG2_E * hazard_integral(HazardFunction(envelope), math.log(n))


def u_star_sandwich(envelope: Envelope, n: int) -> RadiusBounds:
    """Bounds driven by the critical dimension alone:
    ``((u*-1)/4) log2 n`` and ``2 + log2 e + ((u*-1)/2) log2 n``."""
    u_star = quantile_u_star(envelope, n)
    log_n = math.log2(n)
    return RadiusBounds(
        n=n,
        lower_bits=(u_star - 1) / 4 * log_n,
        upper_bits=2 + LOG2_E + (u_star - 1) / 2 * log_n,
        lower_method="critical-dimension",
        upper_method="critical-dimension",
    )
