"""Exception types raised across the package."""


class RelstateError(Exception):
    """Base class for all package errors."""


class DimensionError(RelstateError, ValueError):
    """Operands have incompatible or missing dimensions."""


class ValidationError(RelstateError, ValueError):
    """An object violates one of its stated invariants.

    The message always names the violated invariant so that callers (the CLI
    in particular) can surface it verbatim.
    """


class NumericalConsistencyError(RelstateError, ArithmeticError):
    """Two quantities that agree in exact arithmetic disagree beyond tolerance."""


class OracleScaleError(RelstateError, ValueError):
    """A brute-force oracle was asked to run beyond its supported scale."""
