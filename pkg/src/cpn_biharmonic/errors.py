"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for failures of a geometric computation."""


class DimensionError(GeometryError, ValueError):
    """Vectors of incompatible length were combined."""


class DomainError(GeometryError, ValueError):
    """A parameter lies outside the domain where the operation is defined."""


class DegenerateError(GeometryError):
    """A normalization or division hit a vanishing quantity."""


class ImmersionError(DegenerateError):
    """The chart is not an immersion at the requested point."""


class MinimalPointError(DegenerateError):
    """A formula that divides by |H| was evaluated where H vanishes."""


class IntegrationError(GeometryError):
    """An ODE integration produced a degenerate frame."""


class IntegrabilityError(GeometryError):
    """Two coordinate flows of a moving-frame system fail to commute."""


class InconsistencyError(GeometryError):
    """An algebraic system has no admissible solution."""


class ClassError(GeometryError, ValueError):
    """A helix class was requested outside the range where it is defined."""
