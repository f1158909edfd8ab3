"""Analytic tails of mass functions on the positive integers.

A tail describes ``f(x)`` for every ``x`` beyond the explicit head of a mass
function. Both families keep every tail quantity (sums, log-sums, entropy
contributions, inversions) in closed form so no truncation error enters the
bounds computed from them.
"""

import math
from typing import Annotated, Literal, Union

import mpmath
import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln, zeta

from ..utils import FloatArray, search_first_array

ArrayLike = Union[int, float, npt.NDArray[np.int64], npt.NDArray[np.float64]]


class GeometricTail(BaseModel):
    """Geometric-type tail ``f(x) = scale * ratio**x``."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["geometric"] = "geometric"
    ratio: Annotated[
        float, Field(gt=0, lt=1, description="Common ratio r of the tail.")
    ]
    scale: Annotated[float, Field(gt=0, description="Scale c of the tail.")]

    def log_value(self, x: ArrayLike) -> FloatArray:
        """Natural logarithm of ``f(x)``."""
        x_f = np.asarray(x, dtype=np.float64)
        return np.asarray(math.log(self.scale) + x_f * math.log(self.ratio))

    def value(self, x: ArrayLike) -> FloatArray:
        """Evaluate ``f(x)``."""
        return np.exp(self.log_value(x))

    def log_survival(self, u: ArrayLike) -> FloatArray:
        """Natural logarithm of ``sum_{x>u} f(x)``."""
        u_f = np.asarray(u, dtype=np.float64)
        return np.asarray(
            math.log(self.scale)
            + (u_f + 1.0) * math.log(self.ratio)
            - math.log1p(-self.ratio)
        )

    def survival(self, u: ArrayLike) -> FloatArray:
        """``sum_{x>u} f(x)`` in closed form."""
        return np.exp(self.log_survival(u))

    def entropy_after(self, u: int) -> float:
        """``sum_{x>u} f(x) log2(1/f(x))`` in closed form."""
        ratio = self.ratio
        mass = float(self.survival(u))
        first_moment = (
            self.scale
            * ratio ** (u + 1)
            * ((u + 1) - u * ratio)
            / (1.0 - ratio) ** 2
        )
        return -math.log2(self.scale) * mass - math.log2(ratio) * first_moment

    def log_value_sum(self, first: int, last: int) -> float:
        """``sum_{x=first}^{last} ln f(x)``."""
        if last < first:
            return 0.0
        count = last - first + 1
        return count * math.log(self.scale) + math.log(self.ratio) * (
            (first + last) * count / 2.0
        )

    def inverse_survival(
        self, target: FloatArray, start: int
    ) -> npt.NDArray[np.int64]:
        """Smallest ``x >= start`` with ``sum_{y>x} f(y) < target``."""
        level = (
            np.log(target) - math.log(self.scale) + math.log1p(-self.ratio)
        ) / math.log(self.ratio)
        candidate = np.maximum(np.floor(level), start).astype(np.int64)
        # one step of rounding repair in both directions
        too_small = self.survival(candidate) >= target
        candidate = np.where(too_small, candidate + 1, candidate)
        lower = np.maximum(candidate - 1, start)
        can_drop = (lower < candidate) & (self.survival(lower) < target)
        return np.where(can_drop, lower, candidate).astype(np.int64)


class PowerTail(BaseModel):
    """Power-type tail ``f(x) = scale * x**(-exponent)`` with exponent > 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["power"] = "power"
    exponent: Annotated[
        float,
        Field(gt=1, description="Tail exponent alpha, summable for alpha > 1."),
    ]
    scale: Annotated[float, Field(gt=0, description="Scale c of the tail.")]

    def log_value(self, x: ArrayLike) -> FloatArray:
        """Natural logarithm of ``f(x)``."""
        x_f = np.asarray(x, dtype=np.float64)
        return np.asarray(math.log(self.scale) - self.exponent * np.log(x_f))

    def value(self, x: ArrayLike) -> FloatArray:
        """Evaluate ``f(x)``."""
        return np.exp(self.log_value(x))

    def log_survival(self, u: ArrayLike) -> FloatArray:
        """Natural logarithm of ``sum_{x>u} f(x) = scale * zeta(alpha, u+1)``."""
        alpha = self.exponent
        q = np.asarray(u, dtype=np.float64) + 1.0
        hurwitz = np.asarray(zeta(alpha, q), dtype=np.float64)
        with np.errstate(divide="ignore"):
            exact = np.log(hurwitz)
        # Euler-Maclaurin expansion once the Hurwitz zeta underflows
        asymptotic = (
            (1.0 - alpha) * np.log(q)
            - math.log(alpha - 1.0)
            + np.log1p(
                (alpha - 1.0) / (2.0 * q) + alpha * (alpha - 1.0) / (12.0 * q**2)
            )
        )
        return np.asarray(
            math.log(self.scale) + np.where(hurwitz > 0, exact, asymptotic)
        )

    def survival(self, u: ArrayLike) -> FloatArray:
        """``sum_{x>u} f(x)`` via the Hurwitz zeta function."""
        return np.exp(self.log_survival(u))

    def entropy_after(self, u: int) -> float:
        """``sum_{x>u} f(x) log2(1/f(x))``.

        The logarithmic moment ``sum_{x>u} x**(-alpha) ln x`` is the negated
        derivative of the Hurwitz zeta function in its first argument.
        """
        alpha = self.exponent
        mass = float(self.survival(u))
        log_moment = -self.scale * float(mpmath.zeta(alpha, u + 1, 1))
        return -math.log2(self.scale) * mass + alpha * log_moment / math.log(2)

    def log_value_sum(self, first: int, last: int) -> float:
        """``sum_{x=first}^{last} ln f(x)``."""
        if last < first:
            return 0.0
        count = last - first + 1
        return float(
            count * math.log(self.scale)
            - self.exponent * (gammaln(last + 1.0) - gammaln(float(first)))
        )

    def inverse_survival(
        self, target: FloatArray, start: int
    ) -> npt.NDArray[np.int64]:
        """Smallest ``x >= start`` with ``sum_{y>x} f(y) < target``."""
        log_target = np.log(target)
        return search_first_array(
            lambda x: self.log_survival(x) < log_target,
            count=len(log_target),
            start=start,
        )


Tail = Annotated[Union[GeometricTail, PowerTail], Field(discriminator="kind")]
