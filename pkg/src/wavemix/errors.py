"""Exception hierarchy shared by all wavemix modules."""


class WavemixError(Exception):
    """Base class for every error raised by this package."""


class SpecFormatError(WavemixError, ValueError):
    """A system or process document could not be parsed."""


class ValidationError(WavemixError, ValueError):
    """Input parsed fine but violates a model invariant."""


class OffShellError(ValidationError):
    """Signed mode frequencies do not sum to zero.

    ``residual`` holds the signed sum that was found.
    """

    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"off-shell residual {residual:.17g} exceeds tolerance {tol:.3g}")


class SingularityError(WavemixError, ArithmeticError):
    """A resolvent denominator vanished (real-axis pole hit with no damping)."""

    def __init__(self, message, slot=None, terms=None):
        self.slot = slot
        self.terms = list(terms) if terms is not None else []
        super().__init__(message)


class OracleError(WavemixError, RuntimeError):
    """The time-domain propagation left its regime of validity."""
