"""Exact information radius of small finite families.

The minimax redundancy of a finite family equals the capacity of the
channel from the family index to the block ``x^n``; the capacity is found
with Blahut-Arimoto iterations stopped by the gap between the lower and the
upper capacity estimate.
"""

import math
from functools import reduce
from typing import Sequence, Tuple

import numpy as np
from scipy.special import rel_entr

from ..distributions import Pmf, quantized_pmf
from ..exceptions import DomainError
from ..utils import FloatArray, logger

CAPACITY_TOLERANCE = 1e-8
MAX_ITERATIONS = 200_000
MAX_OUTCOMES = 4096


def capacity_bounds(
    channel: FloatArray,
    tolerance: float = CAPACITY_TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
) -> Tuple[float, float, FloatArray]:
    """Blahut-Arimoto capacity of a channel given row by row.

    Returns the lower and upper capacity estimate in bits and the final
    input distribution.
    """
    rows = np.asarray(channel, dtype=np.float64)
    prior = np.full(rows.shape[0], 1.0 / rows.shape[0])
    lower = upper = 0.0
    for iteration in range(max_iter):
        output = prior @ rows
        divergence = np.sum(rel_entr(rows, output[np.newaxis, :]), axis=1)
        lower = float(prior @ divergence)
        upper = float(divergence.max())
        if upper - lower < tolerance:
            logger.debug("Capacity converged after %i iterations", iteration)
            break
        prior = prior * np.exp(divergence - upper)
        prior /= prior.sum()
    else:
        logger.warning(
            "Capacity iteration stopped with gap %g after %i iterations",
            upper - lower,
            max_iter,
        )
    return lower / math.log(2), upper / math.log(2), prior


def _block_law(pmf: Pmf, size: int, n: int) -> FloatArray:
    letters = np.zeros(size, dtype=np.float64)
    letters[: pmf.head_size] = pmf.head[:size]
    return reduce(np.multiply.outer, [letters] * n).ravel()


def exact_radius_small(family: Sequence[Pmf], n: int) -> float:
    """Information radius in bits of the ``n``-fold products of a finite
    family of finitely supported pmfs."""
    if not family:
        raise DomainError("the family is empty")
    if n < 1:
        raise DomainError(f"n has to be positive, got {n}")
    sizes = [pmf.support_size for pmf in family]
    if any(size is None for size in sizes):
        raise DomainError("exact radii need finitely supported pmfs")
    size = max(s for s in sizes if s is not None)
    if size**n > MAX_OUTCOMES:
        raise DomainError(
            f"{size}**{n} outcomes exceed the limit of {MAX_OUTCOMES}"
        )
    channel = np.stack([_block_law(pmf, size, n) for pmf in family])
    lower, _, _ = capacity_bounds(channel)
    return max(0.0, lower)


def projection_radius_check(
    family: Sequence[Pmf], k: int, n: int
) -> Tuple[float, float]:
    """Radius of the family after the tail quantizer of size ``k`` next to
    the radius of the family itself."""
    projected = [quantized_pmf(pmf, k) for pmf in family]
    return exact_radius_small(projected, n), exact_radius_small(family, n)
