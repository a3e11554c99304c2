"""Frenet curves in CP^n(rho): lifted integration, complex torsions and holomorphic helices.

A curve is integrated through a horizontal lift ``z(s)`` together with the
horizontal lifts ``X_1..X_r`` of its Frenet frame.  Since ``z`` is horizontal the
lifted system is

    z' = X_1,    X_j' = (Frenet right-hand side)_j - (rho/4) <X_j, X_1> z,

where ``<,>`` is the Hermitian product; the last term is the sphere/Hopf
correction that keeps every ``X_j`` horizontal.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import calculus as C
from .calculus import Jet, fd_derivative
from .errors import ClassError, DomainError, InconsistencyError, IntegrationError
from .projective import covariant_derivative, horizontal

HELIX_CLASSES = ("I1", "I2", "I3", "I4", "I3'", "I4'")
CLASS_TAGS = HELIX_CLASSES + ("circle", "geodesic")


@dataclass(frozen=True)
class CurveSpec:
    rho: float
    curvatures: tuple = ()
    class_tag: str | None = None
    target_torsions: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "curvatures", tuple(float(k) for k in self.curvatures))
        if any(k <= 0 for k in self.curvatures):
            raise DomainError("curvatures must be strictly positive")
        if self.class_tag is not None and self.class_tag not in CLASS_TAGS:
            raise DomainError(f"unknown class tag {self.class_tag!r}")
        if self.rho <= 0:
            raise DomainError("curves are integrated in CP^n with rho > 0")

    @property
    def order(self) -> int:
        """Osculating order r."""
        return len(self.curvatures) + 1

    def frenet_matrix(self) -> np.ndarray:
        """``K`` with ``X' = K @ X`` (rows index the frame)."""
        r = self.order
        K = np.zeros((r, r))
        for j, k in enumerate(self.curvatures):
            K[j, j + 1] = k
            K[j + 1, j] = -k
        return K


@dataclass(frozen=True)
class Frame:
    """A lift ``z`` with horizontal orthonormal vectors ``X`` (rows)."""

    z: np.ndarray
    X: np.ndarray


@dataclass
class CurveSample:
    rho: float
    s: np.ndarray
    z: np.ndarray  # (N, n+1)
    frames: np.ndarray  # (N, r, n+1)
    spec: CurveSpec | None = None

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    def orthonormality_drift(self) -> float:
        gram = np.real(np.einsum("nix,njx->nij", self.frames, self.frames.conj()))
        return float(np.abs(gram - np.eye(self.frames.shape[1])).max())

    def horizontality_defect(self) -> float:
        overlap = np.einsum("nix,nx->ni", self.frames, self.z.conj())
        return float(np.abs(overlap).max())

    def torsions(self) -> np.ndarray:
        """``tau_ij`` at every sample, shape (N, r, r)."""
        return np.real(np.einsum("nix,njx->nij", 1j * self.frames, self.frames.conj())).transpose(0, 2, 1)

    def covariant_frame_derivative(self) -> np.ndarray:
        """Covariant derivative of each frame vector from 4th-order differences of the samples.

        End samples (two on each side) are NaN.
        """
        h = self.step
        dz = fd_derivative(self.z, h)
        dX = fd_derivative(self.frames, h)
        out = np.full(self.frames.shape, np.nan, dtype=complex)
        for n in range(2, len(self.s) - 2):
            z = self.z[n]
            for j in range(self.frames.shape[1]):
                out[n, j] = covariant_derivative(z, dz[n], self.frames[n, j], dX[n, j], self.rho)
        return out

    def recovered_curvatures(self) -> np.ndarray:
        """``kappa_j = <nabla X_j, X_{j+1}>`` measured from the samples, shape (N, r-1)."""
        D = self.covariant_frame_derivative()
        r = self.frames.shape[1]
        return np.stack(
            [np.real(np.einsum("nx,nx->n", D[:, j], self.frames[:, j + 1].conj())) for j in range(r - 1)], axis=1
        )

    def frenet_defect(self) -> float:
        """Max |nabla X_j - (Frenet right-hand side)_j| over interior samples."""
        if self.spec is None:
            raise ValueError("sample carries no spec")
        D = self.covariant_frame_derivative()[2:-2]
        rhs = np.einsum("jk,nkx->njx", self.spec.frenet_matrix(), self.frames[2:-2])
        return float(np.abs(D - rhs).max())

    def to_csv(self, path) -> None:
        """Columns: s, lift coordinates, frame vectors, recovered kappa_i, tau_ij."""
        N, r, dim = self.frames.shape
        kap = self.recovered_curvatures()
        tau = self.torsions()
        header = ["s"]
        header += [f"{p}_z{k}" for k in range(dim) for p in ("re", "im")]
        header += [f"{p}_X{j + 1}_{k}" for j in range(r) for k in range(dim) for p in ("re", "im")]
        header += [f"kappa{j + 1}" for j in range(r - 1)]
        header += [f"tau{i + 1}{j + 1}" for i in range(r) for j in range(i + 1, r)]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for n in range(N):
                row = [self.s[n]]
                row += [x for c in self.z[n] for x in (c.real, c.imag)]
                row += [x for j in range(r) for c in self.frames[n, j] for x in (c.real, c.imag)]
                row += list(kap[n])
                row += [tau[n, i, j] for i in range(r) for j in range(i + 1, r)]
                w.writerow([f"{x:.17g}" for x in row])


def complex_torsions(z: np.ndarray, X: np.ndarray) -> np.ndarray:
    """``tau_ij = <X_i, J X_j>`` as a full antisymmetric matrix."""
    X = np.asarray(X)
    return np.real(X.conj() @ (1j * X).T)


def _rhs(rho, K, z, X):
    herm = X @ X[0].conj()  # <X_j, X_1>
    return X[0], K @ X - (rho / 4.0) * np.outer(herm, z)


def integrate_frenet(
    spec: CurveSpec,
    initial_frame: Frame,
    length: float,
    step: float = 1e-3,
    stabilize: bool = False,
) -> CurveSample:
    """Classical RK4 on the lifted Frenet system over ``[0, length]``.

    With ``stabilize=True`` the frame is re-orthonormalized (Gram-Schmidt) after
    every step; by default drift is left in place so it can be measured.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    if length < 0:
        raise DomainError("length must be non-negative")
    z = np.array(initial_frame.z, dtype=complex)
    X = np.array(initial_frame.X, dtype=complex)
    r = spec.order
    if X.shape[0] != r:
        raise DomainError(f"frame has {X.shape[0]} vectors, spec needs {r}")
    if r > 2 * (z.shape[0] - 1):
        raise DomainError("osculating order exceeds 2n")
    _check_frame(spec.rho, z, X, 1e-10)
    nsteps = int(round(length / step))
    K = spec.frenet_matrix()
    rho = spec.rho
    zs = np.empty((nsteps + 1,) + z.shape, dtype=complex)
    Xs = np.empty((nsteps + 1,) + X.shape, dtype=complex)
    zs[0], Xs[0] = z, X
    for n in range(nsteps):
        k1 = _rhs(rho, K, z, X)
        k2 = _rhs(rho, K, z + 0.5 * step * k1[0], X + 0.5 * step * k1[1])
        k3 = _rhs(rho, K, z + 0.5 * step * k2[0], X + 0.5 * step * k2[1])
        k4 = _rhs(rho, K, z + step * k3[0], X + step * k3[1])
        z = z + step / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        X = X + step / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if stabilize:
            X = _gram_schmidt(X)
        gram = np.real(X.conj() @ X.T)
        if not np.all(np.isfinite(gram)) or np.abs(gram - np.eye(r)).max() > 1e-2:
            raise IntegrationError(f"frame degenerated at s = {(n + 1) * step:.6g}")
        zs[n + 1], Xs[n + 1] = z, X
    s = step * np.arange(nsteps + 1)
    return CurveSample(rho=rho, s=s, z=zs, frames=Xs, spec=spec)


def _gram_schmidt(X: np.ndarray) -> np.ndarray:
    out = []
    for x in X:
        for b in out:
            x = x - np.real(np.vdot(b, x)) * b
        out.append(x / np.linalg.norm(x))
    return np.array(out)


def _check_frame(rho: float, z: np.ndarray, X: np.ndarray, tol: float) -> None:
    if abs(np.real(np.vdot(z, z)) - 4.0 / rho) > tol * max(1.0, 4.0 / rho):
        raise DomainError("initial lift is not on the sphere |z|^2 = 4/rho")
    gram = np.real(X.conj() @ X.T)
    if np.abs(gram - np.eye(len(X))).max() > tol:
        raise DomainError("initial frame is not orthonormal")
    if np.abs(X @ z.conj()).max() > tol:
        raise DomainError("initial frame is not horizontal")


# -- frames with prescribed torsions ------------------------------------------------------


def _realify(w: np.ndarray) -> np.ndarray:
    return np.concatenate([w.real, w.imag])


def frame_with_torsions(z: np.ndarray, torsions: np.ndarray, rho: float) -> np.ndarray:
    """Orthonormal horizontal ``X_1..X_r`` at ``z`` with ``<X_i, J X_j> = torsions[i, j]``.

    Each ``X_j`` is solved from its inner products with ``X_k`` and ``J X_k``
    (``k < j``); any remaining freedom is filled, in a fixed order, from the
    coordinate directions ``e_1, i e_1, e_2, ...`` projected to the horizontal
    complement.
    """
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(torsions, dtype=float)
    dim = z.shape[0]
    r = tau.shape[0]
    if r > 2 * (dim - 1):
        raise DomainError("too many frame vectors for the horizontal space")
    seeds = []
    for k in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[k] = 1
        seeds += [e, 1j * e]
    X: list[np.ndarray] = []
    for j in range(r):
        rows, target = [], []
        for k, x in enumerate(X):
            rows += [_realify(x), _realify(1j * x)]
            target += [0.0, -tau[k, j]]
        p = np.zeros(2 * dim)
        if rows:
            B = np.array(rows)
            p = np.linalg.lstsq(B, np.array(target), rcond=None)[0]
            if np.abs(B @ p - target).max() > 1e-10:
                raise InconsistencyError(f"torsions inconsistent with an orthonormal frame at X_{j + 1}")
        rem = 1.0 - p @ p
        if rem < -1e-10:
            raise InconsistencyError(f"prescribed torsions force |X_{j + 1}| > 1")
        w = p[:dim] + 1j * p[dim:]
        if rem > 1e-12:
            span = [_realify(b) for b in X] + [_realify(1j * b) for b in X] + [_realify(z), _realify(1j * z)]
            Q = np.linalg.qr(np.array(span).T)[0] if span else np.zeros((2 * dim, 0))
            for sd in seeds:
                q = _realify(sd)
                q = q - Q @ (Q.T @ q)
                if np.linalg.norm(q) > 1e-8:
                    q = q / np.linalg.norm(q)
                    break
            else:
                raise InconsistencyError("no room left for the next frame vector")
            w = w + math.sqrt(rem) * (q[:dim] + 1j * q[dim:])
        X.append(w)
    X = np.array(X)
    if np.abs(complex_torsions(z, X) - tau).max() > 1e-9:
        raise InconsistencyError("torsion matrix is not realizable (orientation or norm mismatch)")
    return X


def base_point(rho: float, n: int) -> np.ndarray:
    z = np.zeros(n + 1, dtype=complex)
    z[0] = 2.0 / math.sqrt(rho)
    return z


def _skew(r: int, entries: dict) -> np.ndarray:
    t = np.zeros((r, r))
    for (i, j), val in entries.items():
        t[i - 1, j - 1] = val
        t[j - 1, i - 1] = -val
    return t


def helix_class_torsions(k1: float, k2: float, k3: float, cls: str) -> np.ndarray:
    """Complex torsions of an order-4 holomorphic helix in CP^2 of the given class."""
    if min(k1, k2, k3) <= 0:
        raise DomainError("curvatures must be positive")
    if cls not in HELIX_CLASSES:
        raise ClassError(f"unknown helix class {cls!r}")
    equal = math.isclose(k1, k3, rel_tol=0, abs_tol=1e-14 * max(k1, k3))
    if cls in ("I3", "I4") and equal:
        raise ClassError(f"class {cls} needs kappa1 != kappa3; use {cls}'")
    if cls in ("I3'", "I4'") and not equal:
        raise ClassError(f"class {cls} is defined only for kappa1 == kappa3")
    if cls in ("I1", "I2"):
        mu = (k1 + k3) / math.hypot(k2, k1 + k3)
        s = 1 if cls == "I1" else -1
        t12, t23 = s * mu, s * k2 * mu / (k1 + k3)
        return _skew(4, {(1, 2): t12, (3, 4): t12, (2, 3): t23, (1, 4): t23})
    if cls in ("I3", "I4"):
        nu = (k1 - k3) / math.hypot(k2, k1 - k3)
        s = 1 if cls == "I3" else -1
        t12, t23 = s * nu, s * k2 * nu / (k1 - k3)
        return _skew(4, {(1, 2): t12, (3, 4): -t12, (2, 3): t23, (1, 4): -t23})
    s = 1 if cls == "I3'" else -1
    return _skew(4, {(2, 3): s, (1, 4): -s})


def helix_spec(curvatures: Sequence[float], cls: str, rho: float, n: int = 2) -> tuple[CurveSpec, Frame]:
    tau = helix_class_torsions(*curvatures, cls)
    spec = CurveSpec(rho, tuple(curvatures), cls, tau)
    z = base_point(rho, n)
    return spec, Frame(z, frame_with_torsions(z, tau, rho))


def circle_spec(kappa: float, tau: float, rho: float, n: int = 2) -> tuple[CurveSpec, Frame]:
    """A circle of curvature ``kappa`` with complex torsion ``tau`` (|tau| < 1)."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    if not abs(tau) < 1:
        raise DomainError("circles are constructed only for |tau| < 1")
    t = _skew(2, {(1, 2): tau})
    spec = CurveSpec(rho, (kappa,), "circle", t)
    z = base_point(rho, n)
    return spec, Frame(z, frame_with_torsions(z, t, rho))


def geodesic_spec(rho: float, n: int = 2) -> tuple[CurveSpec, Frame]:
    z = base_point(rho, n)
    return CurveSpec(rho, (), "geodesic", None), Frame(z, frame_with_torsions(z, np.zeros((1, 1)), rho))


# -- exact lifts of holomorphic helices and jet-based Frenet analysis -------------------------


def lifted_generator(spec: CurveSpec) -> np.ndarray:
    """Matrix ``M`` with ``[z, X_1..X_r]' = [z, X_1..X_r] M`` when the torsions are constant."""
    if spec.target_torsions is None:
        raise ValueError("spec carries no torsions")
    r = spec.order
    tau = np.asarray(spec.target_torsions)
    M = np.zeros((r + 1, r + 1), dtype=complex)
    M[1, 0] = 1.0
    K = spec.frenet_matrix()
    for j in range(r):
        M[1:, 1 + j] = K[j]
        # <X_j, X_1> = delta_j1 + i <X_j, J X_1>
        M[0, 1 + j] = -(spec.rho / 4.0) * ((1.0 if j == 0 else 0.0) + 1j * tau[j, 0])
    return M


def helix_lift(spec: CurveSpec, frame: Frame) -> Callable:
    """Closed-form lift ``s -> z(s)`` of a holomorphic helix; accepts jets."""
    M = lifted_generator(spec)
    F0 = np.column_stack([frame.z] + list(frame.X))
    e0 = np.zeros(M.shape[0])
    e0[0] = 1.0

    def lift(s, _unused=None):
        return C.matvec(F0, C.expm_action([M], [s], e0))

    return lift


@dataclass(frozen=True)
class FrenetAnalysis:
    curvatures: np.ndarray
    frame: np.ndarray
    torsions: np.ndarray
    closure: float  # |nabla X_r + kappa_{r-1} X_{r-1}|
    speed: float


def frenet_analysis(curve: Callable, s: float, rho: float, r: int) -> FrenetAnalysis:
    """Frenet frame, curvatures and torsions of a lifted curve from its jets at ``s``.

    ``curve`` maps a parameter (float or jet) to any lift in C^{n+1}; the
    parametrization need not be by arc length.
    """
    order = r + 1
    f = C.as_jet(curve(Jet.variable(s, 0, order)), order)
    z = f * (2.0 / math.sqrt(rho) / C.sqrt(C.re_dot(f, f)))
    dz = z.d(0)
    x = horizontal(z, dz, rho)
    speed = C.sqrt(C.re_dot(x, x))

    def nabla(w):
        return covariant_derivative(z, dz, w, w.d(0), rho) * (1.0 / speed)

    frame = [x * (1.0 / speed)]
    kappas = []
    for j in range(r - 1):
        w = nabla(frame[j])
        if j > 0:
            w = w + kappas[j - 1] * frame[j - 1]
        k = C.sqrt(C.re_dot(w, w))
        kappas.append(k)
        frame.append(w * (1.0 / k))
    tail = nabla(frame[r - 1])
    if r > 1:
        tail = tail + kappas[r - 2] * frame[r - 2]
    X = np.array([e.value for e in frame])
    return FrenetAnalysis(
        curvatures=np.array([k.value for k in kappas]),
        frame=X,
        torsions=complex_torsions(z.value, X),
        closure=float(np.linalg.norm(tail.value)),
        speed=float(speed.value),
    )
