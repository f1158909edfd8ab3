"""Volume-comparison bounds on the Hellinger metric entropy of envelope
classes, the resulting fixed point and admissibility checks."""

import math
from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq
from scipy.special import gammaln

from ..distributions import Envelope, HazardFunction
from ..exceptions import DomainError, NoSignChangeError
from ..utils import logger, search_first
from .bounds import LOG2_E, hazard_integral

EPSILON_BRACKET = (1e-9, 1.0)
HAUSSLER_OPPER_GRID = 64
RESIDUAL_TOLERANCE = 1e-6


class MetricEntropyBounds(BaseModel):
    """Bounds in nats on the metric entropy at radius ``epsilon``."""

    model_config = ConfigDict(frozen=True)

    epsilon: Annotated[float, Field(gt=0, lt=1, description="Radius.")]
    lower_raw_nats: Annotated[
        float, Field(description="Log volume ratio, may be negative.")
    ]
    lower_nats: Annotated[float, Field(ge=0, description="Lower bound.")]
    upper_nats: Annotated[float, Field(ge=0, description="Upper bound.")]
    n_eps: Annotated[
        int, Field(ge=1, description="Effective dimension at this radius.")
    ]
    l_f: Annotated[int, Field(ge=1, description="Envelope support start.")]
    m_dim: Annotated[int, Field(ge=0, description="Dimension of the ball.")]


def log_ball_volume(m: int) -> float:
    """Natural logarithm of the volume of the unit ball in ``m`` dimensions."""
    return float(m / 2 * math.log(math.pi) - gammaln(m / 2 + 1))


def metric_entropy_bounds(envelope: Envelope, epsilon: float) -> MetricEntropyBounds:
    """Volume-comparison bounds at radius ``epsilon``.

    The effective dimension is ``N = min{m >= 1: F(m) < epsilon**2 / 16}``
    with ``F`` the envelope probability tail. The lower bound compares the
    box ``prod [0, sqrt f(i)]``, ``l_f < i <= N``, with an ``epsilon`` ball,
    the upper bound the enlarged box over ``1..N`` with an ``epsilon/8`` ball.
    """
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon has to lie in (0, 1), got {epsilon}")
    probability = envelope.probability
    l_f = probability.l_f
    level = epsilon**2 / 16
    n_eps = search_first(lambda m: probability.survival(m) < level, start=1)
    m_dim = max(0, n_eps - l_f)
    root_sum = 0.5 * envelope.log_mass_sum(l_f + 1, n_eps)
    lower_raw = root_sum - log_ball_volume(m_dim) + m_dim * math.log(1 / epsilon)
    if m_dim == 0:
        lower_raw = 0.0
    head = envelope.masses(np.arange(1, min(l_f, n_eps) + 1, dtype=np.int64))
    # e^{-b} = F(l_f)
    tail_after = probability.survival(l_f)
    upper = (
        float(np.sum(np.log(np.sqrt(head) + epsilon / 4)))
        + root_sum
        - log_ball_volume(n_eps)
        + m_dim / math.sqrt(1.0 - tail_after)
        + n_eps * math.log(8 / epsilon)
    )
    lower = max(0.0, lower_raw)
    return MetricEntropyBounds(
        epsilon=epsilon,
        lower_raw_nats=lower_raw,
        lower_nats=lower,
        upper_nats=max(upper, lower),
        n_eps=n_eps,
        l_f=l_f,
        m_dim=m_dim,
    )


def epsilon_star(envelope: Envelope, n: int) -> float:
    """Solve ``l(1/eps) = n eps**2 / 8`` with
    ``l(1/eps) = int_1^{1/eps**2} U(x) / (2x) dx``.

    Raises
    ------
    NoSignChangeError: if the equation has no sign change in (1e-9, 1).
    """
    if n < 2:
        raise DomainError(f"n has to be at least 2, got {n}")
    hazard = HazardFunction(envelope)

    def gap(log_eps: float) -> float:
        return hazard_integral(hazard, -2 * log_eps) - n * math.exp(2 * log_eps) / 8

    low, high = (math.log(edge) for edge in EPSILON_BRACKET)
    at_low, at_high = gap(low), gap(high)
    if at_low * at_high > 0:
        logger.error("No sign change of the fixed point equation for n=%i", n)
        raise NoSignChangeError(
            f"no sign change in epsilon range {EPSILON_BRACKET} for n={n}"
        )
    log_eps = float(brentq(gap, low, high, xtol=1e-14, rtol=1e-15))
    epsilon = math.exp(log_eps)
    integral = hazard_integral(hazard, -2 * log_eps)
    if abs(gap(log_eps)) > RESIDUAL_TOLERANCE * max(1.0, integral):
        logger.warning("Fixed point residual %g at n=%i", gap(log_eps), n)
    logger.debug("epsilon*=%g for n=%i", epsilon, n)
    return epsilon


def admissibility(envelope: Envelope, k: int, n: int) -> bool:
    """Whether ``F(k-1) <= epsilon*(n)**2 / 16``."""
    if k < 1:
        raise DomainError(f"k has to be positive, got {k}")
    tail = envelope.probability.survival(k - 1)
    if tail == 0:
        return True
    return tail <= epsilon_star(envelope, n) ** 2 / 16


def haussler_opper_lower(
    envelope: Envelope, n: int, grid_size: int = HAUSSLER_OPPER_GRID
) -> float:
    """``log2(e) sup_eps min(H_eps, n eps**2 / 8) - 1`` in bits, with the
    metric entropy replaced by its lower bound and the supremum taken over
    log-spaced radii in [1e-6, 1)."""
    radii = np.logspace(-6.0, 0.0, grid_size, endpoint=False)
    best = max(
        min(metric_entropy_bounds(envelope, float(eps)).lower_nats, n * eps**2 / 8)
        for eps in radii
    )
    return max(0.0, LOG2_E * best - 1.0)
