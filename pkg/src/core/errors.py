"""
Exception hierarchy for isogroups.

Everything raised on purpose by the library derives from IsogroupsError, and also
from the builtin that fits best, so callers can catch either.
"""


class IsogroupsError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(IsogroupsError, ValueError):
    pass


class NotOrthogonalError(IsogroupsError, ValueError):
    pass


class NotTranslationOnVError(IsogroupsError, ValueError):
    """An isometry does not restrict to a translation of the given affine subspace."""


class NonDiscreteError(IsogroupsError, ArithmeticError):
    """Two distinct enumerated elements are suspiciously close to each other."""

    def __init__(self, message, first=None, second=None, distance=None):
        super().__init__(message)
        self.first = first
        self.second = second
        self.distance = distance


class LatticeError(IsogroupsError, ArithmeticError):
    """Input vectors are not consistent with a discrete additive subgroup."""


class PreconditionError(IsogroupsError, ValueError):
    pass


class RadiusError(IsogroupsError, ValueError):
    """A requested radius exceeds what the enumerated data can answer."""


class NonCommutingError(IsogroupsError, ValueError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class SingleBlockError(IsogroupsError, ValueError):
    pass


class ConfigError(IsogroupsError, ValueError):
    """A pipeline config file could not be parsed or validated."""
