"""Probability models driving the arithmetic coder.

Both models hand out integer frequency intervals over the symbol indices
``0..k-1``; the static model keeps a fixed table, the Krichevsky-Trofimov
model adds one half to every count and adapts after each symbol.
"""

import abc
import math
from bisect import bisect_right
from itertools import accumulate
from typing import ClassVar, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

from ..distributions import Pmf, quantized_pmf
from ..exceptions import DomainError, SymbolRangeError
from ..utils import FloatArray, IntArray

STATIC_PRECISION = 32
"""Static probabilities are floored at ``2**-STATIC_PRECISION``."""


class FenwickTree:
    """Prefix sums of positive integer weights with logarithmic updates."""

    def __init__(self, size: int, initial: int = 1) -> None:
        self.size = size
        self._tree: List[int] = [0] + [initial] * size
        for index in range(1, size + 1):
            parent = index + (index & -index)
            if parent <= size:
                self._tree[parent] += self._tree[index]
        self._top = 1 << (size.bit_length() - 1) if size else 0

    def copy(self) -> "FenwickTree":
        """Independent copy of the tree."""
        other = FenwickTree(0)
        other.size, other._top = self.size, self._top
        other._tree = list(self._tree)
        return other

    def add(self, index: int, delta: int) -> None:
        """Add ``delta`` to the weight of ``index`` (0-based)."""
        position = index + 1
        while position <= self.size:
            self._tree[position] += delta
            position += position & -position

    def prefix(self, count: int) -> int:
        """Sum of the first ``count`` weights."""
        total = 0
        while count > 0:
            total += self._tree[count]
            count -= count & -count
        return total

    def find(self, value: int) -> int:
        """Index ``i`` with ``prefix(i) <= value < prefix(i + 1)``."""
        position, step = 0, self._top
        while step:
            nxt = position + step
            if nxt <= self.size and self._tree[nxt] <= value:
                position = nxt
                value -= self._tree[nxt]
            step >>= 1
        return position


class CoderModel(abc.ABC):
    """Integer frequency model over the indices ``0..k-1``."""

    coder_id: ClassVar[int]
    name: ClassVar[str]

    def __init__(self, k: int) -> None:
        if k < 1:
            raise DomainError(f"alphabet size has to be positive, got {k}")
        self.k = k

    def check(self, indices: IntArray) -> IntArray:
        """Convert symbols ``1..k`` to indices, rejecting anything else."""
        symbols = np.asarray(indices, dtype=np.int64)
        if symbols.size and (symbols.min() < 1 or symbols.max() > self.k):
            raise SymbolRangeError(
                f"symbols have to lie in 1..{self.k}, got "
                f"{symbols.min()}..{symbols.max()}"
            )
        return symbols - 1

    @property
    @abc.abstractmethod
    def total(self) -> int:
        """Sum of all frequencies."""

    @abc.abstractmethod
    def interval(self, index: int) -> Tuple[int, int]:
        """Cumulative frequency interval of ``index``."""

    @abc.abstractmethod
    def find(self, value: int) -> int:
        """Index whose interval contains ``value``."""

    def update(self, index: int) -> None:
        """Adapt the model after coding ``index``."""

    @abc.abstractmethod
    def copy(self) -> "CoderModel":
        """Model in the same state, sharing nothing mutable."""

    @abc.abstractmethod
    def ideal_code_length(self, y: IntArray) -> float:
        """``-log2 P(y)`` of the symbols ``y`` in ``1..k`` from the current
        state."""


class StaticModel(CoderModel):
    """Fixed frequency table derived from a pmf on ``1..k``."""

    coder_id = 0
    name = "static"

    def __init__(self, probabilities: FloatArray) -> None:
        probabilities = np.asarray(probabilities, dtype=np.float64)
        super().__init__(len(probabilities))
        scaled = np.floor(probabilities * 2.0**STATIC_PRECISION)
        self.frequencies: List[int] = [
            int(v) for v in np.maximum(1, scaled).astype(np.int64)
        ]
        self._cumulative: List[int] = [0] + list(accumulate(self.frequencies))

    @classmethod
    def uniform(cls, k: int) -> "StaticModel":
        """Uniform model on ``1..k``."""
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def from_pmf(cls, pmf: Pmf, k: int) -> "StaticModel":
        """Model of the quantized source ``min(X, k)``."""
        return cls(np.asarray(quantized_pmf(pmf, k).head))

    @property
    def total(self) -> int:
        return self._cumulative[-1]

    def interval(self, index: int) -> Tuple[int, int]:
        return self._cumulative[index], self._cumulative[index + 1]

    def find(self, value: int) -> int:
        return bisect_right(self._cumulative, value) - 1

    def copy(self) -> "StaticModel":
        return self

    def ideal_code_length(self, y: IntArray) -> float:
        indices = self.check(y)
        counts = np.bincount(indices, minlength=self.k)
        log_total = math.log2(self.total)
        log_freq = np.log2(np.asarray(self.frequencies, dtype=np.float64))
        return float(np.sum(counts * (log_total - log_freq)))


class KTModel(CoderModel):
    """Krichevsky-Trofimov estimator.

    The conditional probability of index ``i`` is
    ``(c_i + 1/2) / (t + k/2)``, kept as the exact integer ratio
    ``(2 c_i + 1) / (2 t + k)``.
    """

    coder_id = 1
    name = "kt"

    def __init__(self, k: int, counts: Optional[IntArray] = None) -> None:
        super().__init__(k)
        self.counts: npt.NDArray[np.int64] = np.zeros(k, dtype=np.int64)
        self._tree = FenwickTree(k, 1)
        self._total = k
        if counts is not None:
            for index, count in enumerate(np.asarray(counts, dtype=np.int64)):
                if count:
                    self.counts[index] = count
                    self._tree.add(index, 2 * int(count))
                    self._total += 2 * int(count)

    @property
    def total(self) -> int:
        return self._total

    def interval(self, index: int) -> Tuple[int, int]:
        low = self._tree.prefix(index)
        return low, low + 2 * int(self.counts[index]) + 1

    def find(self, value: int) -> int:
        return self._tree.find(value)

    def update(self, index: int) -> None:
        self.counts[index] += 1
        self._tree.add(index, 2)
        self._total += 2

    def copy(self) -> "KTModel":
        other = KTModel.__new__(KTModel)
        other.k = self.k
        other.counts = self.counts.copy()
        other._tree = self._tree.copy()
        other._total = self._total
        return other

    def ideal_code_length(self, y: IntArray) -> float:
        indices = self.check(y)
        added = np.bincount(indices, minlength=self.k)
        start = self.counts.astype(np.float64) + 0.5
        before = float(np.sum(self.counts))
        half_k = self.k / 2.0
        log_prob = float(
            np.sum(gammaln(start + added) - gammaln(start))
        ) - float(
            gammaln(before + len(indices) + half_k) - gammaln(before + half_k)
        )
        return max(0.0, -log_prob / math.log(2))


def build_model(
    coder: str, k: int, pmf: Optional[Pmf] = None
) -> CoderModel:
    """Fresh coder model by name (``static`` or ``kt``).

    A static model without a pmf is uniform on ``1..k``.
    """
    if coder == KTModel.name:
        return KTModel(k)
    if coder == StaticModel.name:
        if pmf is None:
            return StaticModel.uniform(k)
        return StaticModel.from_pmf(pmf, k)
    raise DomainError(f"unknown coder {coder!r}, choose static or kt")


def ideal_code_length(model: CoderModel, y: IntArray) -> float:
    """``-log2 P_model(y)`` in bits, without integer rounding."""
    return model.ideal_code_length(y)


def empirical_entropy(y: IntArray, k: int) -> float:
    """Plug-in (maximum-likelihood) entropy of ``y`` in bits per symbol."""
    symbols = np.asarray(y, dtype=np.int64)
    if symbols.size == 0:
        return 0.0
    counts = np.bincount(symbols - 1, minlength=k).astype(np.float64)
    frequencies = counts[counts > 0] / symbols.size
    return float(-np.sum(frequencies * np.log2(frequencies)))
