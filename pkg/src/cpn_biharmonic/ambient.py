"""C^{n+1} with its real inner product, the complex structure, and the sphere S^{2n+1}(rho/4)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DimensionError, DomainError

SPHERE_TOL = 1e-12


def as_vector(u) -> np.ndarray:
    """Return ``u`` as a read-only complex128 array; rejects non-finite entries."""
    arr = np.array(u, dtype=complex)
    if arr.ndim != 1:
        raise DimensionError("complex vectors must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise DomainError("complex vector has non-finite entries")
    arr.setflags(write=False)
    return arr


def re_inner(u, v) -> float:
    """Real part of the Hermitian product, i.e. the Euclidean product on R^{2n+2}."""
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise DimensionError(f"length mismatch: {u.shape} vs {v.shape}")
    return float(np.real(np.vdot(v, u)))


def jmul(u) -> np.ndarray:
    """The complex structure J: entrywise multiplication by i."""
    return 1j * np.asarray(u)


@dataclass(frozen=True)
class SphereLift:
    """A point of S^{2n+1}(rho/4): ``<z, z> = 4/rho``."""

    z: np.ndarray
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "z", as_vector(self.z))
        if self.rho <= 0:
            raise DomainError("the sphere model needs rho > 0")
        if abs(re_inner(self.z, self.z) - 4.0 / self.rho) > SPHERE_TOL * max(1.0, 4.0 / self.rho):
            raise DomainError("lift is not on the sphere of radius 2/sqrt(rho)")

    @property
    def dim(self) -> int:
        """Complex dimension n of the projective space."""
        return self.z.shape[0] - 1


def sphere_normalize(z, rho: float) -> SphereLift:
    if rho <= 0:
        raise DomainError("rho must be positive")
    z = np.asarray(z, dtype=complex)
    norm = np.sqrt(re_inner(z, z))
    if norm == 0:
        raise DegenerateError("cannot normalize the zero vector")
    return SphereLift((2.0 / np.sqrt(rho)) * z / norm, rho)
