"""Collection of utility functions."""

import os
from typing import Any, Callable, Dict, List, NotRequired, TypedDict, Union

import numpy as np
import numpy.typing as npt
from jsonschema import validate
from jsonschema.exceptions import ValidationError as JsonSchemaValidationError

from .exceptions import DomainError, SpecError
from .logger import Logger

logger = Logger(debug=bool(int(os.environ.get("DEBUG", "0"))))

IntArray = npt.NDArray[np.int64]
FloatArray = npt.NDArray[np.float64]

SEARCH_LIMIT = 2**62
"""Largest integer the monotone searches are allowed to try."""

SchemaType = TypedDict(
    "SchemaType",
    {
        "type": str,
        "properties": Dict[str, Any],
        "required": NotRequired[List[str]],
        "additionalProperties": bool,
    },
)


def search_first(
    predicate: Callable[[int], bool], start: int = 0, limit: int = SEARCH_LIMIT
) -> int:
    """Find the smallest integer ``u >= start`` with ``predicate(u)``.

    The predicate has to be monotone (False, ..., False, True, ...). The
    search doubles the step until the predicate flips and bisects the last
    bracket.

    Raises
    ------
    DomainError: if the predicate never becomes true below ``limit``.
    """
    if predicate(start):
        return start
    low, step = start, 1
    high = start + step
    while not predicate(high):
        low, step = high, step * 2
        high = start + step
        if high > limit:
            raise DomainError(f"monotone search exceeded {limit}")
    while high - low > 1:
        mid = (low + high) // 2
        if predicate(mid):
            high = mid
        else:
            low = mid
    return high


def search_first_array(
    predicate: Callable[[IntArray], npt.NDArray[np.bool_]],
    count: int,
    start: int = 0,
    limit: int = SEARCH_LIMIT,
) -> IntArray:
    """Elementwise version of :func:`search_first`.

    ``predicate`` receives an int64 array of ``count`` candidates and returns
    the elementwise predicate; element ``i`` of the predicate has to be
    monotone in the candidate value.
    """
    low = np.full(count, start, dtype=np.int64)
    found = predicate(low)
    high = low.copy()
    step = np.ones(count, dtype=np.int64)
    pending = ~found
    high[pending] = start + 1
    while True:
        flipped = predicate(high)
        grow = pending & ~flipped
        if not grow.any():
            break
        low[grow] = high[grow]
        step[grow] *= 2
        high[grow] = start + step[grow]
        if (high[grow] > limit).any():
            raise DomainError(f"monotone search exceeded {limit}")
    while True:
        open_ = pending & (high - low > 1)
        if not open_.any():
            break
        mid = (low + high) // 2
        hit = predicate(mid)
        high = np.where(open_ & hit, mid, high)
        low = np.where(open_ & ~hit, mid, low)
    return np.where(found, start, high).astype(np.int64)


def mix_seed(seed: int, n: int, trial: int) -> int:
    """Derive the 64-bit seed of one Monte Carlo trial.

    The derived seed is the first 64-bit word of
    ``numpy.random.SeedSequence([seed, n, trial])``; it only depends on the
    three integers so trials can run in any order or process.
    """
    sequence = np.random.SeedSequence(
        [seed & 0xFFFFFFFFFFFFFFFF, int(n), int(trial)]
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def format_value(value: Union[None, bool, int, float, str]) -> str:
    """Format a CSV cell: floats with 17 significant digits, no locale."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def csv_line(values: Any) -> str:
    """Join one row of values to a CSV line."""
    return ",".join(map(format_value, values)) + "\n"


def validate_experiment_config(data: Dict[str, Any]) -> None:
    """Check if an experiment config file has a valid structure.

    Parameters
    ----------
    data: dict
        The parsed content of the config file.

    Raises
    ------
    SpecError: If the config does not satisfy the schema.
    """
    positive_int: Dict[str, Any] = {"type": "integer", "minimum": 1}
    schema: SchemaType = {
        "type": "object",
        "properties": {
            "source": {"type": "string"},
            "n_grid": {
                "type": "array",
                "items": positive_int,
                "minItems": 1,
            },
            "tau": {
                "type": "number",
                "exclusiveMinimum": 0,
                "exclusiveMaximum": 1,
            },
            "k_schedule": {"type": "array", "items": positive_int},
            "trials": positive_int,
            "seed": {"type": "integer", "minimum": 0},
            "coder": {"enum": ["static", "kt"]},
            "workers": positive_int,
            "out": {"type": "string"},
        },
        "required": ["source", "n_grid"],
        "additionalProperties": False,
    }
    try:
        validate(data, schema)
    except JsonSchemaValidationError as error:
        logger.error("Config validation failed: %s", error.message)
        raise SpecError(f"Config validation failed: {error.message}") from error
