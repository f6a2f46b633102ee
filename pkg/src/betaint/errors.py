"""Typed error hierarchy.

Every failure mode surfaces as one of these exceptions, never as a NaN, Inf,
or sentinel return: callers need to distinguish "identity fails numerically"
from "kernel left its domain" or "engine ran out of budget".
"""


class BetaIntError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BetaIntError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole of the gamma function or one of its ratios."""


class OverflowRangeError(BetaIntError):
    """Finite-precision overflow that would corrupt the result."""


class ConvergenceError(BetaIntError):
    """An iterative scheme exhausted its budget before meeting tolerance."""


class DivergentHintError(DomainError):
    """Decay hint implies a divergent (or non-absolutely-convergent) integral."""


class EndpointSingularityError(DomainError):
    """Endpoint power-law exponent at or below -1; not integrable."""


class DegenerateProposalError(BetaIntError):
    """Importance-sampling proposal yielded non-finite weights or variance."""


class UnsupportedCombinationError(BetaIntError):
    """No closed form registered for the requested combination."""
