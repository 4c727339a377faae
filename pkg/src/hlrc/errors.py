"""Exception types shared across the package.

Every operation that can reject its input raises one of these rather than a
bare ValueError, so callers (and the CLI) can distinguish validation failures
from genuine bugs.
"""


class HlrcError(Exception):
    """Base class for all package errors."""


# -- field construction and arithmetic --------------------------------------

class NonPrime(HlrcError):
    pass


class FieldTooLarge(HlrcError):
    pass


class DivisionByZero(HlrcError):
    pass


class ZeroPolynomial(HlrcError):
    pass


class InsufficientRank(HlrcError):
    pass


# -- geometry ----------------------------------------------------------------

class TooLarge(HlrcError):
    pass


class PointNotInFlat(HlrcError):
    pass


class LineNotInFlat(HlrcError):
    pass


class BadDims(HlrcError):
    pass


# -- code construction -------------------------------------------------------

class DegreeTooHigh(HlrcError):
    pass


class EmptyS(HlrcError):
    pass


class BadT(HlrcError):
    pass


class LTooLarge(HlrcError):
    pass


class BadOrder(HlrcError):
    pass


# -- recovery ----------------------------------------------------------------

class DegreeTooHighForRecovery(HlrcError):
    pass


class NotEnoughSymbols(HlrcError):
    pass


class Unrecoverable(HlrcError):
    pass


# -- oracles -----------------------------------------------------------------

class BudgetExceeded(HlrcError):
    pass


class TooManyPatterns(HlrcError):
    pass


class DegenerateCode(HlrcError):
    pass


# -- file formats ------------------------------------------------------------

class FormatError(HlrcError):
    pass
