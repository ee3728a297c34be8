"""Exception types raised by lazymp."""


class LazyMPError(Exception):
    """Base class for all library errors."""


class InvalidInputError(LazyMPError, ValueError):
    """An argument violates an operation's precondition."""


class NumericError(LazyMPError, ArithmeticError):
    """Non-finite values entered a numeric routine."""


class ResourceLimitError(LazyMPError):
    """A configured resource budget (e.g. voxel count) would be exceeded."""


class PreconditionError(LazyMPError, ValueError):
    """A planning problem is ill-posed (e.g. start in collision)."""


class ConsistencyError(LazyMPError, RuntimeError):
    """Internal search structures are corrupt (e.g. a parent cycle)."""


class ScenarioError(LazyMPError, ValueError):
    """A scenario file failed to parse or validate."""
