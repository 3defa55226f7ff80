"""Exception types shared across the package.

Each class names the contract violation it reports; none carry extra state
beyond the message except where noted.
"""


class ReinhardtError(Exception):
    """Base class for all package-specific errors."""


class NonUnitConstantTerm(ReinhardtError):
    """Polynomial constant term is not +-1 (so it cannot come from GL_n(Z))."""


class NotInGL(ReinhardtError):
    """Matrix determinant is not +-1."""


class UnsupportedDimension(ReinhardtError):
    """Operation only defined for n in {2, 3}."""


class DimensionMismatch(ReinhardtError):
    """Operands have incompatible dimensions."""


class ZeroVector(ReinhardtError):
    """Vector of all zeros where a nonzero vector is required."""


class NotUnimodular(ReinhardtError):
    """Integer vector whose entries have gcd != 1."""


class NotFixed(ReinhardtError):
    """A v != v where a fixed vector was required."""


class OneInSpectrum(ReinhardtError):
    """det(A - I) = 0, so the affine fixed-point equation is singular."""


class SpectrumNotTotallyRealPositive(ReinhardtError):
    """Eigenvalues are not all real and positive; squaring the matrix fixes signs."""


class EigenvaluesNotNormalized(ReinhardtError):
    """Positive real spectrum but more than one eigenvalue >= 1; use the inverse."""


class PointOutsideRegion(ReinhardtError):
    """Query point is not in the (open) region where the operation needs it."""


class VerificationFailed(ReinhardtError):
    """A sampled geometric verification failed after escalation.

    Attributes: ``t`` (the failing parameter) and ``distance`` (how far
    outside), both also rendered in the message.
    """

    def __init__(self, message, t=None, distance=None):
        super().__init__(message)
        self.t = t
        self.distance = distance


class PoleAtBoundary(ReinhardtError):
    """R <= 1 puts the pole of the disk map on or inside the closed disk."""


class QuadratureUnderflow(ReinhardtError):
    """Boundary grid too coarse (N < 16)."""


class NoConvergence(ReinhardtError):
    """Quadrature refinement hit its cap; message carries the last two values."""


class RhoNotGreaterThanOne(ReinhardtError):
    """Spectral radius must exceed 1 for the width threshold."""


class InputInconsistent(ReinhardtError):
    """Hyperplane pattern and generators cannot both describe a real domain."""
