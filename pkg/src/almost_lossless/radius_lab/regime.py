"""Classification of truncation schedules into redundancy gain regimes.

A schedule ``k_n`` that reaches the critical dimension ``u*(n)`` gains
nothing over coding the full envelope class; a schedule negligible against
``u*(n)`` gains.
"""

import math
import re
from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from ..codec import schedule_k
from ..distributions import Envelope, PowerTail, quantile_u_star
from ..exceptions import DomainError, SpecError
from ..utils import logger
from .bounds import (
    envelope_radius_lower,
    envelope_radius_upper,
    finite_alphabet_radius_bounds,
)
from .metric_entropy import admissibility

GAIN_RATIO = 0.1
"""``k_n / u*(n)`` at or below which a non-increasing ratio counts as gain."""
LOWER_FLOOR = 1e-12

Regime = Literal["gain", "no_gain", "indeterminate"]


class KSchedule(BaseModel):
    """Truncation sizes along a grid of block lengths."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["u_star", "sqrt_u_star", "tau", "fixed", "explicit"]
    offset: int = 0
    tau: Optional[float] = None
    values: Tuple[int, ...] = ()

    def sizes(self, n_grid: Sequence[int], u_stars: Sequence[int]) -> List[int]:
        """``k_n`` for every ``n`` of the grid."""
        if self.kind == "u_star":
            return [max(1, u + self.offset) for u in u_stars]
        if self.kind == "sqrt_u_star":
            return [math.isqrt(u - 1) + 1 for u in u_stars]
        if self.kind == "tau":
            assert self.tau is not None
            return [schedule_k(n, self.tau) for n in n_grid]
        if self.kind == "fixed":
            return [self.values[0]] * len(n_grid)
        if len(self.values) != len(n_grid):
            raise DomainError(
                f"{len(self.values)} truncation sizes for {len(n_grid)} block lengths"
            )
        return list(self.values)


def parse_k_schedule(text: str) -> KSchedule:
    """Parse ``u-star``, ``u-star+<j>``, ``sqrt-u-star``, ``tau=<t>``,
    ``fixed=<k>`` or a comma separated list of sizes."""
    spec = text.strip()
    try:
        if spec == "u-star":
            return KSchedule(kind="u_star")
        if match := re.fullmatch(r"u-star\s*\+\s*(\d+)", spec):
            return KSchedule(kind="u_star", offset=int(match.group(1)))
        if spec == "sqrt-u-star":
            return KSchedule(kind="sqrt_u_star")
        if spec.startswith("tau="):
            tau = float(spec[4:])
            if not 0 < tau < 1:
                raise SpecError(f"tau has to lie in (0, 1), got {tau}")
            return KSchedule(kind="tau", tau=tau)
        if spec.startswith("fixed="):
            k = int(spec[6:])
            if k < 1:
                raise SpecError(f"truncation size has to be positive, got {k}")
            return KSchedule(kind="fixed", values=(k,))
        values = tuple(int(item) for item in spec.split(","))
    except ValueError as error:
        raise SpecError(f"invalid truncation schedule {text!r}") from error
    if any(k < 1 for k in values):
        raise SpecError(f"truncation sizes have to be positive in {text!r}")
    return KSchedule(kind="explicit", values=values)


class RegimeRow(BaseModel):
    """Bounds and classification at one block length."""

    model_config = ConfigDict(frozen=True)

    n: int
    k_n: int
    u_star: int
    lower_bits: Annotated[float, Field(description="Integral lower bound.")]
    upper_bits: Annotated[float, Field(description="Scan upper bound.")]
    restricted_upper_bits: Annotated[
        float, Field(description="Finite alphabet upper bound at k_n.")
    ]
    ratio_proxy: Annotated[
        float, Field(description="Restricted upper over full lower bound.")
    ]
    admissible: Annotated[
        Optional[bool], Field(description="Admissibility at epsilon*(n).")
    ]
    regime: Regime
    warning: Annotated[
        str, Field(description="Consistency warning, empty if none.")
    ] = ""


class RegimeReport(BaseModel):
    """Classification of a truncation schedule along a grid."""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[RegimeRow, ...]

    @property
    def regimes(self) -> List[Regime]:
        """Classification per block length."""
        return [row.regime for row in self.rows]

    @property
    def ratio_proxies(self) -> List[float]:
        """Ratio proxy per block length."""
        return [row.ratio_proxy for row in self.rows]


def _classify(
    k: int, u_star: int, ratio_proxy: float, previous: Optional[float]
) -> Regime:
    if k >= u_star:
        return "no_gain"
    fraction = k / u_star
    shrinking = previous is None or fraction <= previous
    if (fraction <= GAIN_RATIO and shrinking) or ratio_proxy < 1:
        return "gain"
    return "indeterminate"


def classify_regime(
    envelope: Envelope,
    k_schedule: Union[KSchedule, str, Sequence[int]],
    n_grid: Sequence[int],
) -> RegimeReport:
    """Evaluate bounds and the gain regime of ``k_schedule`` along
    ``n_grid``."""
    if isinstance(k_schedule, str):
        k_schedule = parse_k_schedule(k_schedule)
    elif not isinstance(k_schedule, KSchedule):
        k_schedule = KSchedule(kind="explicit", values=tuple(k_schedule))
    grid = list(n_grid)
    u_stars = [quantile_u_star(envelope, n) for n in grid]
    sizes = k_schedule.sizes(grid, u_stars)
    power_law = isinstance(envelope.tail, PowerTail)
    rows = []
    previous: Optional[float] = None
    for n, k, u_star in zip(grid, sizes, u_stars):
        lower = envelope_radius_lower(envelope, n)
        upper = envelope_radius_upper(envelope, n)
        restricted = finite_alphabet_radius_bounds(k, n).upper_bits
        ratio = restricted / max(lower, LOWER_FLOOR)
        warning = ""
        if power_law or lower > upper + 1e-9:
            warning = "lower bound exceeds upper bound" if lower > upper else (
                "power-law envelope, bounds may be inconsistent"
            )
            logger.warning("n=%i: %s", n, warning)
        rows.append(
            RegimeRow(
                n=n,
                k_n=k,
                u_star=u_star,
                lower_bits=lower,
                upper_bits=upper,
                restricted_upper_bits=restricted,
                ratio_proxy=ratio,
                admissible=admissibility(envelope, k, n) if n >= 2 else None,
                regime=_classify(k, u_star, ratio, previous),
                warning=warning,
            )
        )
        previous = k / u_star
    return RegimeReport(rows=tuple(rows))
