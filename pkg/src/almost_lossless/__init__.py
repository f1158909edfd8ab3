"""Almost lossless universal coding on countable alphabets."""

from ._version import __version__
from .codec import decode_stream, encode_stream, two_stage_encode
from .distributions import Envelope, Pmf, parse_envelope, parse_source
from .rate_distortion import rate_distortion

__all__ = [
    "Envelope",
    "Pmf",
    "__version__",
    "decode_stream",
    "encode_stream",
    "parse_envelope",
    "parse_source",
    "rate_distortion",
    "two_stage_encode",
]
