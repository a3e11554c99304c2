"""Numerical verification of biharmonic pmc surfaces in complex space forms.

Surfaces and curves in CP^n(rho) are handled through lifts to the sphere
S^{2n+1}(rho/4); all derivatives are exact jets (truncated Taylor arithmetic).
"""
__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ClassError,
    DegenerateError,
    DimensionError,
    DomainError,
    GeometryError,
    ImmersionError,
    InconsistencyError,
    IntegrabilityError,
    IntegrationError,
    MinimalPointError,
)
