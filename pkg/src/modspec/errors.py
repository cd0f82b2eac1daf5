"""Exception hierarchy shared by all modules."""


class GraphFormatError(ValueError):
    """Raised when an edge-list document cannot be parsed."""


class PreconditionError(ValueError):
    """Raised when an input violates a mathematical hypothesis.

    Typical cases are a disconnected graph handed to a spectral routine,
    or a non-regular graph handed to the sweep cut.
    """


class NumericalCheckError(ArithmeticError):
    """Raised when an internal certificate (residual, identity) fails."""


class OracleCapError(ValueError):
    """Raised when a brute-force enumeration exceeds its size cap."""
