"""Exception and warning types shared across the package."""


class Su11Error(Exception):
    """Base class for all errors raised by this package."""


class InvalidGroupElement(Su11Error):
    """A matrix fails its group invariant beyond the accepted tolerance."""


class DegenerateDecomposition(Su11Error):
    """The affine x rotation factorization is not defined for this input."""


class InvalidLabel(Su11Error):
    """Representation label or coherent-state label out of range."""


class InvalidDegree(Su11Error):
    """Negative or otherwise unusable polynomial degree."""


class IndexOutOfRange(Su11Error):
    """Basis index outside the truncation window."""


class UnknownGenerator(Su11Error):
    """Generator name not in the supported set."""


class TruncationError(Su11Error):
    """The requested tail tolerance needs a truncation order above the cap."""


class NotNormalized(Su11Error):
    """Operation requires a unit-norm state."""


class ProjectionError(Su11Error):
    """Re-expansion in the canonical basis lost too much norm."""


class QuadratureFailure(Su11Error):
    """Adaptive integration could not reach the requested tolerance."""

    def __init__(self, message, achieved=None, requested=None):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested


class MissingDerivative(Su11Error):
    """A differential-operator action needs derivative handles the function lacks."""


class NotAdmissible(Su11Error):
    """Mother wavelet fails the admissibility condition."""


class SingularCoefficient(Su11Error):
    """Equation coefficient is singular at this label; the check is skipped."""


class InvalidParameter(Su11Error):
    """Scalar parameter outside its allowed range."""


class DomainError(Su11Error):
    """Function evaluated outside its analyticity domain."""


class InputDataError(Su11Error):
    """Malformed or unusable input file."""


class TruncationWarning(UserWarning):
    """Banded action leaked amplitude past the truncation edge."""


class CoverageWarning(UserWarning):
    """Coefficient grid boundary carries a non-negligible share of the energy."""
