"""Exception hierarchy shared by every module."""


class GSPPError(Exception):
    """Base class for errors raised by this package."""


class ContractError(GSPPError, ValueError):
    """An argument violates a documented precondition."""


class InfeasibleError(GSPPError):
    """The instance (or a restriction of it) provably has no feasible solution."""


class SizeError(GSPPError):
    """An exhaustive routine was asked to run past its size guard."""


class FormatError(GSPPError, ValueError):
    """A text file does not follow the expected format."""
