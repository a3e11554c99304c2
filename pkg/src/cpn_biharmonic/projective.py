"""Fubini-Study geometry of CP^n(rho) computed on lifts through the Hopf fibration.

Tangent vectors at ``[z]`` are represented by their horizontal lifts ``w`` at the
chosen lift ``z``: ``w`` is complex-orthogonal to ``z``.  J acts as
multiplication by ``i`` and the metric is :func:`re_inner` of the lifts.

Covariant differentiation of a horizontal field ``w(t)`` along a lifted curve
``z(t)`` (not necessarily horizontal) is

    D_t w = h(w') - i a(t) w,    a = (rho/4) Im <z', z>,

where ``h`` is the horizontal projector.  ``h`` removes the sphere-normal and
Hopf-vertical parts of ``w'``; the ``-i a w`` term compensates for the phase
drift of a non-horizontal lift, which makes ``D`` gauge covariant.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import calculus as C
from .ambient import SphereLift, as_vector, jmul, re_inner, sphere_normalize
from .errors import DegenerateError, DomainError

HORIZONTAL_TOL = 1e-10


@dataclass(frozen=True)
class ProjectivePoint:
    lift: SphereLift

    @classmethod
    def from_vector(cls, z, rho: float) -> "ProjectivePoint":
        return cls(sphere_normalize(z, rho))

    @property
    def rho(self) -> float:
        return self.lift.rho

    def same_point(self, other: "ProjectivePoint", tol: float = 1e-10) -> bool:
        """Gauge equality: the lifts differ by a unit complex phase."""
        if self.rho != other.rho or self.lift.z.shape != other.lift.z.shape:
            return False
        z, w = self.lift.z, other.lift.z
        overlap = np.vdot(z, w)  # <w, z>_herm
        return abs(abs(overlap) - 4.0 / self.rho) < tol


@dataclass(frozen=True)
class TangentVector:
    base: ProjectivePoint
    w: np.ndarray

    def __post_init__(self):
        w = as_vector(self.w)
        object.__setattr__(self, "w", w)
        z = self.base.lift.z
        scale = max(1.0, float(np.linalg.norm(w)))
        if abs(re_inner(w, z)) > HORIZONTAL_TOL * scale or abs(re_inner(w, jmul(z))) > HORIZONTAL_TOL * scale:
            raise DomainError("tangent vector lift is not horizontal")

    def __add__(self, other: "TangentVector") -> "TangentVector":
        _check_base(self, other)
        return TangentVector(self.base, self.w + other.w)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        _check_base(self, other)
        return TangentVector(self.base, self.w - other.w)

    def __mul__(self, c: float) -> "TangentVector":
        return TangentVector(self.base, float(c) * self.w)

    __rmul__ = __mul__

    def J(self) -> "TangentVector":
        return TangentVector(self.base, jmul(self.w))

    def dot(self, other: "TangentVector") -> float:
        _check_base(self, other)
        return re_inner(self.w, other.w)

    def norm(self) -> float:
        return float(np.sqrt(re_inner(self.w, self.w)))


def _check_base(*vectors: TangentVector) -> None:
    z0 = vectors[0].base.lift.z
    for x in vectors[1:]:
        if x.base.lift.z.shape != z0.shape or not np.array_equal(x.base.lift.z, z0):
            raise DomainError("tangent vectors live at different base points")


def horizontal(z, w, rho: float):
    """Remove the components of ``w`` along ``z`` and ``iz`` (works on jets)."""
    return w - (rho / 4.0) * C.herm(w, z) * z


def horizontal_project(z: SphereLift, w) -> TangentVector:
    w = np.asarray(w, dtype=complex)
    return TangentVector(ProjectivePoint(z), horizontal(z.z, w, z.rho))


def connection_form(z, dz, rho: float):
    """Hopf connection coefficient ``(rho/4) Im <dz, z>`` of a lifted direction."""
    return (rho / 4.0) * C.imag(C.herm(dz, z))


def covariant_derivative(z, dz, w, dw, rho: float):
    """Lift of the Levi-Civita derivative of a horizontal field ``w`` along ``z``.

    ``dz`` and ``dw`` are the ordinary C^{n+1} derivatives in the chosen direction.
    All arguments may be jets.
    """
    return horizontal(z, dw, rho) - 1j * connection_form(z, dz, rho) * w


def curvature_lift(rho: float, x, y, z):
    """Closed-form curvature of CP^n(rho) applied to horizontal lifts."""
    jx, jy = 1j * x, 1j * y
    return (rho / 4.0) * (
        C.re_dot(y, z) * x
        - C.re_dot(x, z) * y
        + C.re_dot(jy, z) * jx
        - C.re_dot(jx, z) * jy
        + 2.0 * C.re_dot(x, jy) * (1j * z)
    )


def curvature_tensor(rho: float, X: TangentVector, Y: TangentVector, Z: TangentVector) -> TangentVector:
    """R(X,Y)Z for the Fubini-Study metric of holomorphic sectional curvature rho."""
    _check_base(X, Y, Z)
    return TangentVector(X.base, curvature_lift(rho, X.w, Y.w, Z.w))


def sectional_curvature(rho: float, X: TangentVector, Y: TangentVector) -> float:
    _check_base(X, Y)
    area2 = X.dot(X) * Y.dot(Y) - X.dot(Y) ** 2
    scale = X.dot(X) * Y.dot(Y)
    if scale == 0 or area2 <= 1e-14 * scale:
        raise DegenerateError("sectional curvature of a degenerate plane")
    return curvature_tensor(rho, X, Y, Y).dot(X) / area2


def kahler_sectional(rho: float, cos_theta: float) -> float:
    """Sectional curvature of a plane with Kaehler angle cosine ``<JX, Y>``."""
    return rho / 4.0 * (1.0 + 3.0 * cos_theta**2)
