"""Exception hierarchy shared by every module."""


class CombrecError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class DimensionError(CombrecError, ValueError):
    """Objects live on different grids or have the wrong shape."""


class GridSizeError(CombrecError, ValueError):
    """N^d exceeds the configured index cap."""


class DisjointnessError(CombrecError, ValueError):
    pass


class MembershipError(CombrecError, ValueError):
    """A coefficient is not a member of the supplied coefficient set."""


class NoEffectiveSupportError(CombrecError, ValueError):
    """The zero comb has no effective support."""


class EmptySetError(CombrecError, ValueError):
    pass


class CapExceededError(CombrecError, RuntimeError):
    """An exhaustive search would exceed its configured candidate cap."""


class TotalErasureError(CombrecError, ValueError):
    """Every frequency was erased; nothing is left to recover from."""
