"""Tail quantizer of the two-stage code and its distortion accounting."""

import math
from typing import Annotated, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..distributions import Envelope, Pmf, envelope_tail_sum
from ..exceptions import DomainError
from ..utils import IntArray


class TailQuantizer(BaseModel):
    """Letter-by-letter map ``x -> min(x, k)``.

    The residual cell ``{k, k+1, ...}`` is represented by its smallest
    element ``k``, so reconstruction is the identity on the indices.
    """

    model_config = ConfigDict(frozen=True)

    k: Annotated[int, Field(ge=2, description="Truncation size.")]

    def quantize(self, x: IntArray) -> IntArray:
        """Map symbols to cell indices ``1..k``."""
        symbols = np.asarray(x, dtype=np.int64)
        if symbols.size and symbols.min() < 1:
            raise DomainError("symbols are positive integers")
        return np.minimum(symbols, self.k)

    def dequantize(self, indices: IntArray) -> IntArray:
        """Map cell indices back to their prototype symbols."""
        return np.asarray(indices, dtype=np.int64).copy()


def quantize_block(quantizer: TailQuantizer, x: IntArray) -> IntArray:
    """Quantize a block of symbols."""
    return quantizer.quantize(x)


def hamming_distortion(x: IntArray, reconstruction: IntArray) -> float:
    """Fraction of positions where the reconstruction differs."""
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.count_nonzero(x != np.asarray(reconstruction))) / x.size


def expected_distortion(pmf: Pmf, k: int) -> Tuple[float, float]:
    """Exact expected Hamming distortion ``P(X > k)`` of the tail quantizer
    together with the cell bound ``P(X >= k)``."""
    if k < 2:
        raise DomainError(f"k has to be at least 2, got {k}")
    return pmf.survival(k), pmf.survival(k - 1)


def envelope_distortion_bound(envelope: Envelope, k: int) -> float:
    """Worst-case distortion bound ``sum_{x>=k} f(x)`` over the class."""
    return envelope_tail_sum(envelope, k)


def schedule_k(n: int, tau: float) -> int:
    """Truncation size ``max(2, ceil(n**tau))``."""
    if not 0 < tau < 1:
        raise DomainError(f"tau has to lie in (0, 1), got {tau}")
    if n < 1:
        raise DomainError(f"block length has to be positive, got {n}")
    k = math.ceil(n**tau)
    # integer powers must not be pushed up by rounding
    if (k - 1) ** (1 / tau) >= n - 1e-9 * n and k > 1:
        k -= 1
    return max(2, k)
