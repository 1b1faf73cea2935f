"""Exception hierarchy.

Every error raised on purpose by the library derives from `TpicError`, so
callers (and the command line front end) can tell domain errors apart from
programming mistakes.
"""


class TpicError(ValueError):
    """Base class for domain errors."""


class NotHermitian(TpicError):
    pass


class NonTraceless(TpicError):
    pass


# Alias used by the observable constructors.
NotTraceless = NonTraceless


class ZeroOperator(TpicError):
    pass


class DimMismatch(TpicError):
    pass


class EmptyBasis(TpicError):
    pass


class NotAState(TpicError):
    pass


class TooLarge(TpicError):
    pass


class BadRange(TpicError):
    pass


class BadDimension(TpicError):
    pass


class BadAlpha(TpicError):
    pass


class BadZeroSet(TpicError):
    pass


class AmbiguousZero(TpicError):
    """Raised when a transform value falls inside the zero-tolerance guard band."""


class NotSelfSymmetric(TpicError):
    pass


class NotOddPrime(TpicError):
    pass


class InvalidObservable(TpicError):
    pass


class FormatError(TpicError):
    """Malformed exchange file (bad JSON, missing keys, wrong shapes)."""


class DependentBasis(TpicError):
    pass


class InvalidNoise(TpicError):
    pass
