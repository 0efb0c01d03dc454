"""Error types shared across the toolkit."""


class FrameLabError(Exception):
    """Base class for every toolkit error."""


class NotHermitian(FrameLabError):
    """Input matrix is not Hermitian within tolerance."""


class ConvergenceFailure(FrameLabError):
    """An iterative or library solver failed to converge."""


class SingularMatrix(FrameLabError):
    """Inverse-type operation requested on a rank-deficient matrix."""


class NotPositiveSemidefinite(FrameLabError):
    """Eigenvalues fall below the allowed negativity slack."""


class ShapeMismatch(FrameLabError):
    """Array shapes are inconsistent with the operation."""


class CountMismatch(FrameLabError):
    """Frames have different vector counts."""


class NotAFrame(FrameLabError):
    """Operation requires a spanning (frame) input."""


class NotNormalizedTight(FrameLabError):
    """Operation requires a normalized tight frame."""


class NotOrthonormal(FrameLabError):
    """Columns are not orthonormal within tolerance."""


class NotARepresentation(FrameLabError):
    """Coefficients do not synthesize the given vector."""


class TooLarge(FrameLabError):
    """Problem size exceeds the limit for the requested mode."""


class BadDivisor(FrameLabError):
    """Lattice or step parameter does not divide the signal length."""


class NotCriticalDensity(FrameLabError):
    """Operation requires a critical-density system (a*b = L)."""


class ParameterMismatch(FrameLabError):
    """Gabor systems disagree on (L, a, b)."""


class InvalidCoefficients(FrameLabError):
    """Coefficient vector fails its validation rule."""


class BadIndexSets(FrameLabError):
    """Index sets are not a nested exhaustive chain."""


class DualRouteMismatch(FrameLabError):
    """Two supposedly equivalent computations disagreed."""


class ParseError(FrameLabError):
    """Malformed serialized input."""
