"""Hamming rate-distortion function of a countable-alphabet source.

For a pmf sorted in decreasing order and a water level ``theta`` the
distortion is ``kappa = sum_{i>1} min(theta, f(i))``; the rate at distortion
``d = kappa`` is ``H(mu) - H(mu_theta)`` where ``mu_theta`` puts ``1 - kappa``
on symbol 1 and ``min(theta, f(i))`` on every other symbol.
"""

import math
from typing import Annotated, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import bisect

from .distributions import Pmf, entropy
from .exceptions import DistortionRangeError, DomainError
from .utils import FloatArray, logger, search_first

THETA_XTOL = 1e-15
"""Width of the final water-level bracket."""


class RdPoint(BaseModel):
    """One point of the rate-distortion curve."""

    model_config = ConfigDict(frozen=True)

    d: Annotated[float, Field(ge=0, le=1, description="Target distortion.")]
    theta: Annotated[float, Field(ge=0, description="Water level.")]
    kappa: Annotated[float, Field(ge=0, le=1, description="Achieved distortion.")]
    k_cut: Annotated[
        Optional[int],
        Field(description="Last symbol clipped at the water level."),
    ]
    rate: Annotated[float, Field(ge=0, description="R(d) in bits.")]
    tilde_entropy: Annotated[
        float, Field(ge=0, description="Entropy of the clipped pmf in bits.")
    ]
    entropy: Annotated[float, Field(ge=0, description="H(mu) in bits.")]

    @property
    def entropy_gap(self) -> float:
        """``H(mu) - R(d)``."""
        return self.entropy - self.rate


class RdLimitReport(BaseModel):
    """Rate-distortion points along a distortion grid shrinking to 0."""

    model_config = ConfigDict(frozen=True)

    points: Tuple[RdPoint, ...]
    monotone: Annotated[
        bool,
        Field(description="Entropy gaps shrink along the grid."),
    ]


def sort_decreasing(pmf: Pmf) -> Tuple[Pmf, Tuple[int, ...]]:
    """Sort the head of ``pmf`` in decreasing order.

    Returns the sorted pmf and the 1-based permutation: symbol ``i`` of the
    sorted pmf is symbol ``permutation[i-1]`` of the input; tail symbols keep
    their position.

    Raises
    ------
    DomainError: if a head value is smaller than the first tail value.
    """
    head = np.asarray(pmf.head, dtype=np.float64)
    if pmf.tail is not None and head.size:
        first_tail = float(pmf.tail.value(pmf.head_size + 1))
        if head.min() < first_tail:
            raise DomainError(
                "head values below the tail would have to be interleaved"
            )
    order = np.argsort(-head, kind="stable")
    permutation = tuple(int(i) + 1 for i in order)
    if permutation == tuple(range(1, pmf.head_size + 1)):
        return pmf, permutation
    return (
        Pmf(head=tuple(float(v) for v in head[order]), tail=pmf.tail),
        permutation,
    )


def cut_index(pmf_sorted: Pmf, theta: float) -> int:
    """``K(theta) = min{k > 1: f(k+1) <= theta}``."""
    return search_first(lambda k: pmf_sorted.mass(k + 1) <= theta, start=2)


def kappa(pmf_sorted: Pmf, theta: float) -> float:
    """``sum_{i>1} min(theta, f(i))`` for ``theta`` in (0, f(2)]."""
    if theta <= 0:
        return 0.0
    cut = cut_index(pmf_sorted, theta)
    return (cut - 1) * theta + pmf_sorted.survival(cut)


def max_distortion(pmf_sorted: Pmf) -> float:
    """Largest distortion reachable with ``theta <= f(2)``."""
    return max(0.0, 1.0 - pmf_sorted.mass(1))


def theta_for_distortion(pmf_sorted: Pmf, d: float) -> float:
    """Water level with ``kappa(theta) = d``, by bisection on (0, f(2)].

    Raises
    ------
    DistortionRangeError: if ``d`` is not in (0, 1 - f(1)].
    """
    upper_d = max_distortion(pmf_sorted)
    if not 0 < d <= upper_d:
        raise DistortionRangeError(
            f"distortion {d!r} outside the validity range (0, {upper_d!r}]"
        )
    theta_max = pmf_sorted.mass(2)
    theta = float(
        bisect(
            lambda level: kappa(pmf_sorted, level) - d,
            0.0,
            theta_max,
            xtol=THETA_XTOL,
            maxiter=200,
        )
    )
    logger.debug("Water level %r for distortion %r", theta, d)
    return theta


def tilde_entropy(pmf_sorted: Pmf, theta: float) -> float:
    """Entropy in bits of the pmf clipped at the water level ``theta``."""
    if theta <= 0:
        return 0.0
    cut = cut_index(pmf_sorted, theta)
    level = (cut - 1) * theta + pmf_sorted.survival(cut)
    head = 0.0
    if 0 < level < 1:
        head = -(1 - level) * math.log2(1 - level)
    return max(
        0.0,
        head
        + (cut - 1) * theta * -math.log2(theta)
        + pmf_sorted.partial_entropy(cut),
    )


def tilde_pmf(pmf_sorted: Pmf, theta: float, size: int) -> FloatArray:
    """First ``size`` masses of the clipped pmf."""
    clipped = np.minimum(
        theta, pmf_sorted.masses(np.arange(2, size + 1, dtype=np.int64))
    )
    return np.concatenate([[1.0 - kappa(pmf_sorted, theta)], clipped])


def rate_distortion(pmf: Pmf, d: float) -> RdPoint:
    """Evaluate ``R(d)`` for Hamming distortion."""
    if not 0 <= d <= 1:
        raise DistortionRangeError(f"distortion has to lie in [0, 1], got {d}")
    sorted_pmf, _ = sort_decreasing(pmf)
    h_mu = entropy(pmf)
    if d == 0 or sorted_pmf.mass(1) >= 1.0:
        return RdPoint(
            d=d,
            theta=0.0,
            kappa=0.0,
            k_cut=None,
            rate=h_mu,
            tilde_entropy=0.0,
            entropy=h_mu,
        )
    theta = theta_for_distortion(sorted_pmf, d)
    tilde = tilde_entropy(sorted_pmf, theta)
    return RdPoint(
        d=d,
        theta=theta,
        kappa=min(1.0, kappa(sorted_pmf, theta)),
        k_cut=cut_index(sorted_pmf, theta),
        rate=max(0.0, h_mu - tilde),
        tilde_entropy=tilde,
        entropy=h_mu,
    )


def rd_limit_check(pmf: Pmf, d_grid: Sequence[float]) -> RdLimitReport:
    """Evaluate the entropy gap ``H - R(d)`` along a decreasing grid."""
    grid: List[float] = list(d_grid)
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("the distortion grid has to decrease")
    points = tuple(rate_distortion(pmf, d) for d in grid)
    gaps = [point.entropy_gap for point in points]
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    if not monotone:
        logger.warning("Entropy gaps do not shrink along %s", grid)
    return RdLimitReport(points=points, monotone=monotone)
