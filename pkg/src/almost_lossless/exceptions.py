"""Definition of all errors raised by the toolkit."""


class AlwcError(Exception):
    """Base class of every error the toolkit raises on purpose."""


class SpecError(AlwcError, ValueError):
    """A distribution/envelope spec string or a config could not be parsed."""


class DomainError(AlwcError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class DistortionRangeError(DomainError):
    """The target distortion lies outside the closed-form validity range."""


class NoSignChangeError(DomainError):
    """A root finder bracket has no sign change."""


class AbsoluteContinuityError(DomainError):
    """A divergence argument puts mass where the reference has none."""


class CodecError(AlwcError):
    """Base class of the encoder/decoder errors."""


class SymbolRangeError(CodecError, ValueError):
    """A symbol lies outside the alphabet of the coder model."""


class ContainerFormatError(CodecError):
    """A coded block is corrupt, truncated or of an unknown version."""
