"""Exception types shared across the package."""


class UncrowdError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteCoordinate(UncrowdError, ValueError):
    """A sample coordinate is NaN or infinite."""


class CoordinateOutOfRange(UncrowdError, ValueError):
    """A coordinate falls outside the unit square and normalization is off."""


class LabelLengthMismatch(UncrowdError, ValueError):
    """Label list length differs from the sample count."""


class ZeroBackground(UncrowdError, ValueError):
    """Explicit background density is not strictly positive."""


class SingularMass(UncrowdError, ValueError):
    """Total texture mass is not strictly positive."""


class EmptyDataset(UncrowdError, ValueError):
    """Operation requires at least one sample."""


class TooFewSamples(UncrowdError, ValueError):
    """Operation requires more samples than the neighborhood size."""


class OutOfRangeLevel(UncrowdError, ValueError):
    """Transition level outside [0, iterations]."""


class LevelOutOfRange(UncrowdError, ValueError):
    """Contour level outside the open (min, max) density range."""


class DegeneratePolygon(UncrowdError, ValueError):
    """Lasso polygon has no interior."""


class InvalidSpec(UncrowdError, ValueError):
    """Dataset generator spec is inconsistent."""


class ParseError(UncrowdError, ValueError):
    """CSV row could not be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FormatError(UncrowdError, ValueError):
    """Binary field file has a bad magic or inconsistent header."""


class UnknownSession(UncrowdError, KeyError):
    """Session id is absent (never created or evicted)."""


class UnknownKind(UncrowdError, ValueError):
    """Unsupported encoding kind."""


class PayloadTooLarge(UncrowdError, ValueError):
    """Dataset exceeds the configured session sample cap."""


class InvalidParams(UncrowdError, ValueError):
    """Regularization parameters fail validation."""
