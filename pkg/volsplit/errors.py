"""Exception hierarchy for volsplit.

Numerical divergence that is a legitimate answer (an infinite supremum, a weight
outside the doubling class, a growing norm ladder) is never raised: it is recorded
in the returned report. The exceptions below are reserved for malformed input and
for numerics that could not produce a usable value.
"""


class VolsplitError(Exception):
    """Base class for all volsplit errors."""


class WeightSyntaxError(VolsplitError):
    """A weight expression could not be parsed.

    Attributes:
        source: The expression text.
        position: 0-based character offset of the first error.
    """

    def __init__(self, message: str, source: str, position: int):
        self.message = message
        self.source = source
        self.position = position
        super().__init__(f"{message} at offset {position} in {source!r}")


class UnknownIdentifierError(WeightSyntaxError):
    """An identifier other than x, the named constants and the known functions."""


class IntegrationError(VolsplitError):
    """The integrand produced a non-finite value, or quadrature could not proceed."""

    def __init__(self, message: str, node: float | None = None):
        self.node = node
        super().__init__(message if node is None else f"{message} (at x={node:.6g})")


class DivergentIntegralError(IntegrationError):
    """The integral is infinite; ``where`` is ``"zero"`` or ``"infinity"``."""

    def __init__(self, message: str, where: str, node: float | None = None):
        self.where = where
        super().__init__(message, node)


class ConvergenceError(VolsplitError):
    """An iterative procedure exhausted its budget without a usable estimate."""


class DomainError(VolsplitError):
    """Parameters violate the documented domain of an operation."""


class CriterionError(VolsplitError):
    """Both factors of a criterion product diverge, so the product is undefined."""


class SingularMomentError(VolsplitError):
    """The moment (Hankel) matrix is numerically singular."""

    def __init__(self, message: str, condition: float):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class ConfigError(VolsplitError):
    """A configuration file or command-line override was rejected."""
