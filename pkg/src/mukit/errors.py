"""Exception hierarchy shared by every mukit module."""


class MukitError(Exception):
    """Base class for all mukit errors."""


class InputError(MukitError, ValueError):
    """Malformed or non-finite input."""


class DimensionError(InputError):
    """Matrix and block structure (or two operands) disagree on size."""


class StructureError(InputError):
    """Invalid block-structure specification."""


class NumericalError(MukitError, ArithmeticError):
    """An iterative kernel failed to converge.

    ``partial`` carries whatever was computed before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotInClassError(MukitError, ValueError):
    """A matrix does not satisfy the hypotheses of an exact-mu formula."""


class HypothesisError(MukitError, ValueError):
    """The block structure does not contain the diagonal unitary a formula needs."""


class NoPerturbationError(MukitError, ValueError):
    """rho(MU) is zero, so no destabilizing perturbation can be formed."""


class UnsupportedStructureError(MukitError, ValueError):
    """The brute-force oracle only handles repeated-scalar blocks."""


class ComplexityError(MukitError, ValueError):
    """The requested brute-force scan is too large."""
