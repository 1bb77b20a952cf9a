"""Exception types raised by levygap."""


class LevyGapError(Exception):
    """Base class for all levygap errors."""


class ExtrapolationError(LevyGapError):
    """Tabulated data queried outside its grid with no declared tail law."""


class NonConvergenceError(LevyGapError):
    """A quadrature or series did not converge; ``partial`` holds the last estimate."""

    def __init__(self, message, partial=float("nan")):
        super().__init__(message)
        self.partial = partial


class InfiniteMassError(LevyGapError):
    """The speed measure mu(dx) = dx / a(x) has infinite total mass."""


class NoSignalError(LevyGapError):
    """A centred Monte Carlo observable never rises above the noise floor."""


class UnsupportedFamilyError(LevyGapError):
    """The requested operation is not available for this symbol family."""


class DomainError(LevyGapError, ValueError):
    """Parameters outside the domain where a formula is defined."""
