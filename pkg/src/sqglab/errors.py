"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A grid, profile, or config parameter violates a structural precondition."""


class DomainError(ValueError):
    """A numeric parameter lies outside its mathematically valid range."""


class BlockRangeError(IndexError):
    """A dyadic block index is outside the realizable range for the grid."""


class SimulationError(RuntimeError):
    """A time-stepping run aborted (blow-up, NaN, or inconsistent state)."""


class QuadratureBudgetError(ValueError):
    """A direct-quadrature norm was requested on a grid too large for it."""
