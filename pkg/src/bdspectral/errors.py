"""Exception types raised by the library."""


class ChainError(Exception):
    """Base class for all errors raised by bdspectral."""


class InvalidParameterError(ChainError, ValueError):
    """Chain parameters or operation arguments violate their constraints."""


class CutError(ChainError, ValueError):
    """A point lies on the wrong side of the cut [-2 sqrt(pq), 2 sqrt(pq)]."""


class PoleError(ChainError, ArithmeticError):
    """A Stieltjes transform was evaluated at one of its poles."""


class PreconditionError(ChainError):
    """The hypotheses of the underlying theorem do not hold for these parameters."""
