"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`WelchError`,
which the command-line front end maps to exit code 3.
"""


class WelchError(Exception):
    """Base class for all library errors."""


class NonSquare(WelchError, ValueError):
    pass


class NumericalFailure(WelchError, ArithmeticError):
    pass


class NegativeSpectrum(WelchError, ValueError):
    pass


class IndexOutOfRange(WelchError, IndexError):
    pass


class DimensionMismatch(WelchError, ValueError):
    pass


class WrongExponent(WelchError, ValueError):
    pass


class InvalidPair(WelchError, ValueError):
    """Malformed dual pair: ragged rows, non-finite or non-real entries."""


class Overflow(WelchError, OverflowError):
    pass


class LiftTooLarge(WelchError, ValueError):
    pass


class TooFewVectors(WelchError, ValueError):
    pass


class NotNormalized(WelchError, ValueError):
    pass


class DegenerateCount(WelchError, ValueError):
    pass


class DegenerateMeasure(WelchError, ValueError):
    pass


class NonPositiveMass(WelchError, ValueError):
    pass


class NegativeRadicand(WelchError, ValueError):
    pass
