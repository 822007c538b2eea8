"""Exception hierarchy shared by every xylab module."""


class XylabError(Exception):
    """Base class for all library errors."""


class DimensionError(XylabError, ValueError):
    """Operator or state dimension is wrong or exceeds the configured cap."""


class DomainError(XylabError, ValueError):
    """Argument lies outside the domain where the operation is defined."""


class ContractError(XylabError, ValueError):
    """Input violates a precondition such as hermiticity or normalization."""


class SingularParameterError(XylabError, ValueError):
    """Closed-form expression has no finite value at the requested parameters."""


class DegenerateApproximationError(XylabError, ArithmeticError):
    """Quasi-pure approximation is undefined for the given state."""


class ConvergenceError(XylabError, ArithmeticError):
    """Iterative kernel failed to converge."""
