"""Exception types raised by the fivewalk package."""


class FiveWalkError(Exception):
    """Base class for all fivewalk errors."""


class NormError(FiveWalkError):
    """An initial spinor's squared norm deviates from 1 beyond tolerance."""


class DecompositionError(FiveWalkError):
    """A spectral decomposition failed its unitarity or residual checks."""


class DegeneracyError(FiveWalkError):
    """The eigenvalue-1 band is not one-dimensional at the requested point."""


class RankError(FiveWalkError):
    """Gram-Schmidt input is numerically rank deficient."""


class DegenerateError(FiveWalkError):
    """An output cannot be normalized (e.g. an all-zero probability grid)."""


class UsageError(FiveWalkError):
    """Malformed or missing command-line arguments."""
