"""Operations on pmfs and envelopes."""

import math
from typing import Tuple, Union, overload

import numpy as np
from scipy.special import entr, rel_entr

from ..exceptions import AbsoluteContinuityError, DomainError
from ..utils import FloatArray, IntArray, logger, search_first, search_first_array
from .core import MASS_TOLERANCE, Envelope, EnvelopeProbability, MassFunction, Pmf
from .partition import PartitionSpec

PartitionLike = Union[int, PartitionSpec]


def _as_partition(part: PartitionLike) -> PartitionSpec:
    if isinstance(part, PartitionSpec):
        return part
    return PartitionSpec.tail_cells(part)


def _tail_size(part: PartitionLike) -> int:
    partition = _as_partition(part)
    if partition.kind != "tail" or partition.k is None:
        raise DomainError("a tail partition is required")
    return partition.k


def mass(pmf: MassFunction, x: int) -> float:
    """Evaluate the mass function at symbol ``x``."""
    return pmf.mass(x)


def tail_mass(function: MassFunction, u: int) -> float:
    """``sum_{x>u} f(x)``."""
    if u < 0:
        raise DomainError(f"tail index has to be non-negative, got {u}")
    return function.survival(u)


def entropy(pmf: Pmf) -> float:
    """Shannon entropy in bits."""
    return pmf.partial_entropy(0)


def sample(pmf: Pmf, seed: int, n: int) -> IntArray:
    """Draw ``n`` i.i.d. symbols by inversion of the survival function.

    Symbol ``X`` is the smallest ``x`` with ``sum_{y>x} f(y) < V`` for
    ``V`` uniform on (0, 1].
    """
    if n < 0:
        raise DomainError(f"sample size has to be non-negative, got {n}")
    rng = np.random.default_rng(seed)
    level = 1.0 - rng.random(n)
    head_size = pmf.head_size
    # decreasing survival of the head symbols 1..m
    survival = pmf.survival_array(np.arange(1, head_size + 1, dtype=np.int64))
    position = np.searchsorted(-survival, -level, side="right")
    symbols = (position + 1).astype(np.int64)
    beyond = position >= head_size
    if beyond.any():
        if pmf.tail is None:
            # only reachable through rounding in the last head suffix
            symbols[beyond] = max(head_size, 1)
        else:
            symbols[beyond] = pmf.tail.inverse_survival(
                level[beyond], start=head_size + 1
            )
    return symbols


def is_summable(function: MassFunction) -> Tuple[bool, float]:
    """Summability flag and sum of an envelope.

    Every constructible tail is summable, the flag is kept for callers that
    branch on it.
    """
    total = function.total
    return math.isfinite(total), total


def envelope_probability(envelope: Envelope) -> EnvelopeProbability:
    """The envelope probability of ``envelope`` and its start ``l_f``."""
    return envelope.probability


def envelope_tail_sum(envelope: Envelope, k: int) -> float:
    """``sum_{x>=k} f(x)``, the worst-case tail distortion over the class."""
    if k < 1:
        raise DomainError(f"k has to be positive, got {k}")
    return envelope.survival(k - 1)


def quantile_u_star(envelope: Envelope, n: int) -> int:
    """Critical dimension ``u* = min{u >= 1: F(u) < 1/n}`` of the envelope
    probability tail ``F``."""
    if n < 1:
        raise DomainError(f"n has to be positive, got {n}")
    probability = envelope.probability
    return search_first(
        lambda u: probability.survival(u) * n < 1.0, start=1
    )


class HazardFunction:
    """Inverse of the piecewise linear hazard of an envelope probability.

    The hazard ``h(u) = -ln F(u)`` is known on the integers and extended
    linearly in between, ``U(t)`` solves ``h(U) = ln t``.
    """

    def __init__(self, envelope: Envelope) -> None:
        self.probability = envelope.probability
        if self.probability.pmf.support_size is not None:
            raise DomainError("the hazard function needs an infinite support")

    def hazard(self, u: IntArray) -> FloatArray:
        """Hazard at the integers ``u >= 0``."""
        u = np.asarray(u, dtype=np.int64)
        value = -self.probability.pmf.log_survival_array(u)
        return np.where(u == 0, 0.0, value)

    def knots(self, log_t: float) -> FloatArray:
        """Hazard values ``h(0), h(1), ...`` not exceeding ``log_t``."""
        last = self.integer_bracket(np.asarray([log_t]))[0]
        return self.hazard(np.arange(0, last, dtype=np.int64))

    def integer_bracket(self, log_t: FloatArray) -> IntArray:
        """Smallest integer ``u >= 1`` with ``h(u) > log_t``."""
        return search_first_array(
            lambda u: self.hazard(u) > log_t, count=len(log_t), start=1
        )

    def of_log(self, log_t: FloatArray) -> FloatArray:
        """``U`` as a function of ``ln t``."""
        log_t = np.atleast_1d(np.asarray(log_t, dtype=np.float64))
        if (log_t < 0).any():
            raise DomainError("U is only defined for t >= 1")
        upper = self.integer_bracket(log_t)
        lower = upper - 1
        h_lower = self.hazard(lower)
        h_upper = self.hazard(upper)
        return lower + (log_t - h_lower) / (h_upper - h_lower)

    @overload
    def __call__(self, t: float) -> float: ...

    @overload
    def __call__(self, t: FloatArray) -> FloatArray: ...

    def __call__(
        self, t: Union[float, FloatArray]
    ) -> Union[float, FloatArray]:
        values = np.asarray(t, dtype=np.float64)
        if (values < 1).any():
            raise DomainError("U is only defined for t >= 1")
        result = self.of_log(np.log(values))
        if values.ndim == 0:
            return float(result[0])
        return result


def hazard_u_function(envelope: Envelope) -> HazardFunction:
    """Evaluator of ``U_f(t)`` for ``t >= 1``."""
    return HazardFunction(envelope)


def restricted_entropy(pmf: Pmf, part: PartitionLike) -> float:
    """Entropy in bits of the cell masses of ``part``."""
    masses = _as_partition(part).cell_masses(pmf)
    return float(np.sum(entr(masses))) / math.log(2)


def restricted_kl(mu: Pmf, v: Pmf, part: PartitionLike) -> float:
    """Divergence in bits of the cell masses of ``mu`` from those of ``v``.

    Raises
    ------
    AbsoluteContinuityError: if a cell has mass under ``mu`` but not ``v``.
    """
    partition = _as_partition(part)
    p = partition.cell_masses(mu)
    q = partition.cell_masses(v)
    if ((p > 0) & (q <= 0)).any():
        logger.error("Restricted divergence is infinite on %s", partition)
        raise AbsoluteContinuityError(
            "mu is not absolutely continuous w.r.t. v on the partition"
        )
    return max(0.0, float(np.sum(rel_entr(p, q))) / math.log(2))


def project_envelope(envelope: Envelope, part: PartitionLike) -> Envelope:
    """Envelope induced on ``{1..k}`` by the tail partition of size ``k``:
    ``f(1), ..., f(k-1), min(1, sum_{x>=k} f(x))``."""
    k = _tail_size(part)
    head = envelope.masses(np.arange(1, k, dtype=np.int64))
    last = min(1.0, envelope.survival(k - 1))
    return Envelope.explicit(np.append(head, last))


def quantized_pmf(pmf: Pmf, k: int) -> Pmf:
    """Law of ``min(X, k)``: ``f(1), ..., f(k-1)`` and the folded tail."""
    if k < 2:
        raise DomainError(f"k has to be at least 2, got {k}")
    head = pmf.masses(np.arange(1, k, dtype=np.int64))
    return Pmf.explicit(np.append(head, pmf.survival(k - 1)))


def random_member(envelope: Envelope, k: int, seed: int) -> Pmf:
    """Random pmf on ``{1..k}`` dominated by ``envelope``.

    A Dirichlet proposal is scaled into the capacities ``f(1..k)``, the
    mass clipped at saturated symbols is refilled over the remaining ones.
    """
    capacity = envelope.masses(np.arange(1, k + 1, dtype=np.int64))
    if capacity.sum() < 1.0 - MASS_TOLERANCE:
        raise DomainError(
            f"the envelope carries only {capacity.sum()!r} on 1..{k}"
        )
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k))
    member = np.zeros(k, dtype=np.float64)
    remaining = 1.0
    for _ in range(k + 1):
        free = capacity - member
        active = free > MASS_TOLERANCE
        if remaining <= MASS_TOLERANCE or not active.any():
            break
        share = np.where(active, weights, 0.0)
        if share.sum() <= 0:
            share = active.astype(np.float64)
        share /= share.sum()
        member += np.minimum(free, remaining * share)
        remaining = 1.0 - math.fsum(member)
    return Pmf.explicit(member / math.fsum(member))
