"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: malformed input files are
reported as parse errors (exit 2), violated physical invariants as physics
errors (exit 3) and exceeded size caps as cap errors (exit 4).
"""


class ClickStatsError(Exception):
    """Base class for all errors raised by this package."""


class SpecFormatError(ClickStatsError):
    """An experiment description file failed to parse against the schema."""


class InvalidInput(ClickStatsError, ValueError):
    """An argument violates a mathematical or physical precondition."""


class DimensionMismatch(InvalidInput):
    """Matrix/vector shapes are incompatible with the requested operation."""


class NotHermitian(InvalidInput):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class NotPositiveDefinite(InvalidInput):
    """A Hermitian matrix required to be positive (semi)definite is not."""


class InvalidChannel(InvalidInput):
    """A transmission matrix has singular values above one."""


class UnphysicalState(InvalidInput):
    """A state (or a reduced form derived from one) violates its invariants."""


class CapExceeded(ClickStatsError):
    """A problem size exceeds a configured hard cap."""
