"""Mass functions on the positive integers: probability mass functions and
envelope functions, both given by an explicit head and an analytic tail."""

import math
from functools import cached_property
from typing import Annotated, Any, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator
from scipy.special import entr

from ..exceptions import DomainError
from ..utils import FloatArray, IntArray, search_first
from .tails import GeometricTail, PowerTail, Tail

MASS_TOLERANCE = 1e-12
"""Absolute tolerance of all closed-form mass identities."""

_tail_adapter: TypeAdapter[Tail] = TypeAdapter(Tail)


class MassFunction(BaseModel):
    """Non-negative function on 1, 2, ... with a finite head and an
    optional analytic tail.

    ``head[i]`` is the value at symbol ``i + 1``; the tail, if any, gives the
    value of every symbol beyond the head.
    """

    model_config = ConfigDict(frozen=True)

    head: Annotated[
        Tuple[float, ...],
        Field(description="Values of the symbols 1..m."),
    ] = ()
    tail: Annotated[
        Optional[Tail],
        Field(description="Analytic description of the symbols beyond m."),
    ] = None

    @property
    def head_size(self) -> int:
        """Number of symbols with an explicit value."""
        return len(self.head)

    @property
    def support_size(self) -> Optional[int]:
        """Length of the head for finite functions, None if infinite."""
        if self.tail is None:
            return self.head_size
        return None

    @cached_property
    def _head_values(self) -> FloatArray:
        return np.asarray(self.head, dtype=np.float64)

    @cached_property
    def _head_suffix(self) -> FloatArray:
        # _head_suffix[u] = sum of the head values of the symbols > u
        suffix = np.cumsum(self._head_values[::-1])[::-1]
        return np.concatenate([suffix, [0.0]])

    @cached_property
    def tail_total(self) -> float:
        """Sum of the analytic tail beyond the head."""
        if self.tail is None:
            return 0.0
        return float(self.tail.survival(self.head_size))

    @cached_property
    def total(self) -> float:
        """Sum of the function over all symbols."""
        return math.fsum(self.head) + self.tail_total

    def mass(self, x: int) -> float:
        """Value of the function at symbol ``x >= 1``."""
        if x < 1:
            raise DomainError(f"symbols are positive integers, got {x}")
        if x <= self.head_size:
            return self.head[x - 1]
        if self.tail is None:
            return 0.0
        return float(self.tail.value(x))

    def masses(self, x: IntArray) -> FloatArray:
        """Vectorized :meth:`mass`."""
        x = np.asarray(x, dtype=np.int64)
        in_head = x <= self.head_size
        out = np.zeros(x.shape, dtype=np.float64)
        out[in_head] = self._head_values[x[in_head] - 1]
        if self.tail is not None and (~in_head).any():
            out[~in_head] = self.tail.value(x[~in_head])
        return out

    def survival(self, u: int) -> float:
        """``sum_{x>u} f(x)`` for ``u >= 0``."""
        if u < self.head_size:
            return float(self._head_suffix[u]) + self.tail_total
        if self.tail is None:
            return 0.0
        return float(self.tail.survival(u))

    def survival_array(self, u: IntArray) -> FloatArray:
        """Vectorized :meth:`survival`."""
        return np.exp(self.log_survival_array(u))

    def log_survival_array(self, u: IntArray) -> FloatArray:
        """Natural logarithm of :meth:`survival`, ``-inf`` past the support."""
        u = np.asarray(u, dtype=np.int64)
        in_head = u < self.head_size
        out = np.full(u.shape, -np.inf, dtype=np.float64)
        with np.errstate(divide="ignore"):
            out[in_head] = np.log(
                self._head_suffix[u[in_head]] + self.tail_total
            )
        if self.tail is not None and (~in_head).any():
            out[~in_head] = self.tail.log_survival(u[~in_head])
        return out

    def partial_entropy(self, u: int) -> float:
        """``sum_{x>u} f(x) log2(1/f(x))`` in bits, 0 log 0 = 0."""
        head_part = float(np.sum(entr(self._head_values[u:]))) / math.log(2)
        if self.tail is None:
            return head_part
        return head_part + self.tail.entropy_after(max(u, self.head_size))

    def log_mass_sum(self, first: int, last: int) -> float:
        """``sum_{x=first}^{last} ln f(x)``."""
        if last < first:
            return 0.0
        head_last = min(last, self.head_size)
        total = 0.0
        if first <= head_last:
            with np.errstate(divide="ignore"):
                total += float(
                    np.sum(np.log(self._head_values[first - 1 : head_last]))
                )
        if last > self.head_size:
            if self.tail is None:
                return -math.inf
            total += self.tail.log_value_sum(
                max(first, self.head_size + 1), last
            )
        return total

    def first_at_most(self, threshold: float, start: int = 1) -> int:
        """Smallest symbol ``x >= start`` from which on the function stays
        below or at ``threshold``; requires a non-increasing function from
        ``start`` on."""
        return search_first(
            lambda x: self.mass(x) <= threshold, start=start
        )


class Pmf(MassFunction):
    """Probability mass function on the positive integers."""

    @model_validator(mode="after")
    def _check_normalized(self) -> "Pmf":
        if any(not 0.0 <= value <= 1.0 for value in self.head):
            raise ValueError("probabilities have to lie in [0, 1]")
        if abs(self.total - 1.0) > MASS_TOLERANCE:
            raise ValueError(
                f"probabilities sum to {self.total!r}, expected 1"
            )
        return self

    @classmethod
    def explicit(cls, values: Any) -> "Pmf":
        """Finite pmf on 1..len(values)."""
        return cls(head=tuple(float(v) for v in values))

    @classmethod
    def point_mass(cls, symbol: int = 1) -> "Pmf":
        """Deterministic source emitting ``symbol``."""
        return cls(head=(0.0,) * (symbol - 1) + (1.0,))

    @classmethod
    def geometric(cls, p: float) -> "Pmf":
        """``P(X = x) = (1 - p)**(x - 1) * p``."""
        if not 0 < p < 1:
            raise DomainError(f"geometric parameter has to lie in (0, 1), got {p}")
        return cls(tail=GeometricTail(ratio=1.0 - p, scale=p / (1.0 - p)))

    @classmethod
    def zeta(cls, alpha: float) -> "Pmf":
        """``P(X = x) = x**(-alpha) / zeta(alpha)`` with alpha > 1."""
        if alpha <= 1:
            raise DomainError(f"zeta exponent has to exceed 1, got {alpha}")
        normalizer = float(PowerTail(exponent=alpha, scale=1.0).survival(0))
        return cls(tail=PowerTail(exponent=alpha, scale=1.0 / normalizer))


class EnvelopeProbability(BaseModel):
    """The tightest probability dominated by an envelope function."""

    model_config = ConfigDict(frozen=True)

    l_f: Annotated[
        int,
        Field(ge=1, description="Largest k with sum_{j>=k} f(j) >= 1."),
    ]
    pmf: Annotated[Pmf, Field(description="The envelope probability.")]

    def survival(self, u: int) -> float:
        """Tail ``sum_{x>u}`` of the envelope probability."""
        return self.pmf.survival(u)


class Envelope(MassFunction):
    """Envelope function ``f`` with values in [0, 1] defining the class of
    all pmfs dominated by ``f``.

    Head values above 1 are clipped, analytic tail values above 1 are moved
    into the head as 1.
    """

    @model_validator(mode="before")
    @classmethod
    def _clip_to_unit(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        head = [min(1.0, float(value)) for value in data.get("head", ())]
        tail = data.get("tail")
        if tail is not None:
            tail = _tail_adapter.validate_python(tail)
            start = len(head) + 1
            first = search_first(
                lambda x: float(tail.value(x)) <= 1.0, start=start
            )
            head.extend([1.0] * (first - start))
        return {**data, "head": tuple(head), "tail": tail}

    @model_validator(mode="after")
    def _check_nonempty_class(self) -> "Envelope":
        if any(value < 0 for value in self.head):
            raise ValueError("envelope values have to be non-negative")
        if self.mass_sum < 1.0 - MASS_TOLERANCE:
            raise ValueError(
                f"envelope sums to {self.mass_sum!r} < 1, the class is empty"
            )
        return self

    @property
    def mass_sum(self) -> float:
        """``sum_x f(x)``."""
        return self.total

    @classmethod
    def explicit(cls, values: Any) -> "Envelope":
        """Finite envelope on 1..len(values)."""
        return cls(head=tuple(float(v) for v in values))

    @classmethod
    def geometric(cls, scale: float, ratio: float) -> "Envelope":
        """``f(x) = min(1, scale * ratio**x)``."""
        return cls(tail={"kind": "geometric", "scale": scale, "ratio": ratio})

    @classmethod
    def power(cls, scale: float, alpha: float) -> "Envelope":
        """``f(x) = min(1, scale * x**(-alpha))``."""
        if alpha <= 1:
            raise DomainError(f"power envelopes need alpha > 1, got {alpha}")
        return cls(tail={"kind": "power", "scale": scale, "exponent": alpha})

    @cached_property
    def probability(self) -> EnvelopeProbability:
        """The envelope probability and its support start ``l_f``."""
        # l_f = max{k: sum_{j>=k} f(j) >= 1} = (first k with a smaller tail) - 1
        l_f = (
            search_first(
                lambda k: self.survival(k - 1) < 1.0 - MASS_TOLERANCE,
                start=1,
            )
            - 1
        )
        beyond = self.survival(l_f)
        at_l_f = min(1.0, max(0.0, 1.0 - beyond))
        head = [0.0] * (l_f - 1) + [at_l_f] + list(self.head[l_f:])
        return EnvelopeProbability(
            l_f=l_f, pmf=Pmf(head=tuple(head), tail=self.tail)
        )
