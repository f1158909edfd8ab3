"""Parser of the text notation for sources and envelopes.

Sources::

    geometric:p=0.5
    zeta:alpha=2.0
    explicit:[0.2,0.5,0.3]

Envelopes::

    envelope-geom:c=2.0,r=0.5
    envelope-power:c=1.0,alpha=2.0
    envelope-explicit:[1,0.5,0.5]
"""

import re
from typing import Callable, Dict, List, Tuple, Union

from pydantic import ValidationError

from ..exceptions import AlwcError, SpecError
from ..utils import logger
from .core import Envelope, Pmf

_SPEC_PATTERN = re.compile(r"^\s*([a-z-]+)\s*:\s*(.*?)\s*$")


def _parse_number(text: str, spec: str) -> float:
    try:
        return float(text)
    except ValueError as error:
        raise SpecError(f"{text!r} is not a number in {spec!r}") from error


def _parse_list(body: str, spec: str) -> List[float]:
    if not (body.startswith("[") and body.endswith("]")):
        raise SpecError(f"expected a bracketed list in {spec!r}")
    inner = body[1:-1].strip()
    if not inner:
        raise SpecError(f"empty value list in {spec!r}")
    return [_parse_number(item.strip(), spec) for item in inner.split(",")]


def _parse_keys(body: str, keys: Tuple[str, ...], spec: str) -> Dict[str, float]:
    values: Dict[str, float] = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in keys:
            raise SpecError(f"unknown parameter {key!r} in {spec!r}")
        if key in values:
            raise SpecError(f"duplicate parameter {key!r} in {spec!r}")
        values[key] = _parse_number(value.strip(), spec)
    missing = [key for key in keys if key not in values]
    if missing:
        raise SpecError(f"missing parameter(s) {', '.join(missing)} in {spec!r}")
    return values


def _geometric_envelope(body: str, spec: str) -> Envelope:
    values = _parse_keys(body, ("c", "r"), spec)
    return Envelope.geometric(scale=values["c"], ratio=values["r"])


def _power_envelope(body: str, spec: str) -> Envelope:
    values = _parse_keys(body, ("c", "alpha"), spec)
    return Envelope.power(scale=values["c"], alpha=values["alpha"])


_SOURCES: Dict[str, Callable[[str, str], Pmf]] = {
    "geometric": lambda body, spec: Pmf.geometric(
        _parse_keys(body, ("p",), spec)["p"]
    ),
    "zeta": lambda body, spec: Pmf.zeta(
        _parse_keys(body, ("alpha",), spec)["alpha"]
    ),
    "explicit": lambda body, spec: Pmf.explicit(_parse_list(body, spec)),
}

_ENVELOPES: Dict[str, Callable[[str, str], Envelope]] = {
    "envelope-geom": _geometric_envelope,
    "envelope-power": _power_envelope,
    "envelope-explicit": lambda body, spec: Envelope.explicit(
        _parse_list(body, spec)
    ),
}


def _split(spec: str) -> Tuple[str, str]:
    match = _SPEC_PATTERN.match(spec)
    if match is None:
        raise SpecError(f"malformed spec {spec!r}, expected <name>:<params>")
    return match.group(1), match.group(2)


def _build(
    table: Dict[str, Callable[[str, str], Union[Pmf, Envelope]]], spec: str
) -> Union[Pmf, Envelope]:
    name, body = _split(spec)
    if name not in table:
        raise SpecError(
            f"unknown kind {name!r}, choose from {', '.join(table)}"
        )
    try:
        return table[name](body, spec)
    except SpecError:
        raise
    except (AlwcError, ValidationError) as error:
        logger.debug("Invalid parameters in %s: %s", spec, error)
        raise SpecError(f"invalid parameters in {spec!r}: {error}") from error


def parse_source(spec: str) -> Pmf:
    """Parse a source spec like ``geometric:p=0.5`` into a :class:`Pmf`."""
    result = _build(_SOURCES, spec)  # type: ignore[arg-type]
    assert isinstance(result, Pmf)
    return result


def parse_envelope(spec: str) -> Envelope:
    """Parse an envelope spec like ``envelope-geom:c=2,r=0.5``."""
    result = _build(_ENVELOPES, spec)  # type: ignore[arg-type]
    assert isinstance(result, Envelope)
    return result


def parse_spec(spec: str) -> Union[Pmf, Envelope]:
    """Parse either kind of spec."""
    name, _ = _split(spec)
    if name in _ENVELOPES:
        return parse_envelope(spec)
    return parse_source(spec)
