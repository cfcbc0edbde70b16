"""Exception types shared across the package.

Every error raised by this package derives from :class:`GameToolError`, so
callers can catch one type at the CLI boundary.  Subclasses also derive from
the closest builtin (ValueError, KeyError, RuntimeError) so that generic
handling keeps working.
"""

from __future__ import annotations


class GameToolError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GameToolError, ValueError):
    """A numeric argument is outside its mathematical domain."""


class ArgumentContractError(GameToolError, ValueError):
    """Arguments are structurally wrong (overlap, wrong length, bad range)."""


class UnknownVariableError(GameToolError, KeyError):
    """A variable name is not part of the distribution."""


class StochasticMatrixError(GameToolError, ValueError):
    """A channel matrix is not column stochastic or has the wrong shape."""


class DistributionError(GameToolError, ValueError):
    """A probability table is negative or not normalized."""


class BoxShapeError(GameToolError, ValueError):
    """Conditional box tables disagree in shape or fail validation."""


class WiringError(GameToolError, ValueError):
    """A strategy references box inputs that do not exist."""


class ResourceLimitError(GameToolError, RuntimeError):
    """An exact enumeration would exceed the configured size cap."""


class InfeasibleBiasError(GameToolError, ValueError):
    """A target bias vector cannot be realized (sum of squares above 1)."""


class ChainNotApplicableError(GameToolError, RuntimeError):
    """The full entropic chain needs classical shared randomness."""


class NotApplicableError(GameToolError, RuntimeError):
    """A derived quantity's precondition does not hold for this report."""


class SpecFormatError(GameToolError, ValueError):
    """A strategy spec string or input file cannot be parsed."""
