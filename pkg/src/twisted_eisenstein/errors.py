"""Exception types shared by all modules."""


class TwistedEisensteinError(Exception):
    """Base class for errors raised by this package."""


class DomainError(TwistedEisensteinError, ValueError):
    """Parameters lie outside the region where an operation is defined."""


class PoleError(TwistedEisensteinError, ArithmeticError):
    """A Gamma or zeta pole is hit and no finite limit exists."""


class TruncationError(TwistedEisensteinError, RuntimeError):
    """A truncated series could not reach the requested accuracy."""
