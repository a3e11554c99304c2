"""Pointwise extrinsic geometry of a surface in CP^n(rho) given by an arbitrary lift.

A :class:`Chart` maps ``(u, v)`` to C^{n+1}; the image need be neither normalized
nor horizontal.  :class:`SurfacePoint` normalizes it onto S^{2n+1}(rho/4) in
jet arithmetic and assembles tangent lifts, the induced metric, Christoffel
symbols, the second fundamental form, H and its normal derivatives.  Every
output is gauge covariant: multiplying the chart by a phase ``exp(i phi(u, v))``
multiplies vector outputs by ``exp(i phi)`` and leaves scalars unchanged.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import calculus as C
from .calculus import Jet
from .errors import DegenerateError, ImmersionError
from .projective import covariant_derivative, curvature_lift, horizontal

RANK_TOL = 1e-10
MINIMAL_TOL = 1e-10


@dataclass(frozen=True)
class Chart:
    """A parametrized surface: ``map(u, v)`` is any (non-zero) lift into C^{n+1}.

    ``map`` must accept floats and :class:`~cpn_biharmonic.calculus.Jet` seeds and
    use the jet-aware functions of :mod:`cpn_biharmonic.calculus`.
    """

    map: Callable
    rho: float
    domain: tuple = ((0.0, 1.0), (0.0, 1.0))
    name: str = "chart"

    def __call__(self, u, v):
        return self.map(u, v)

    def regauged(self, phase: Callable) -> "Chart":
        """The same surface with lift multiplied by ``exp(i phase(u, v))``."""
        f = self.map
        return Chart(lambda u, v: C.exp(1j * phase(u, v)) * f(u, v), self.rho, self.domain, self.name + "~gauge")

    def swapped(self) -> "Chart":
        """Reparametrization ``(u, v) -> (v, u)``."""
        f = self.map
        (a, b), (c, d) = self.domain
        return Chart(lambda u, v: f(v, u), self.rho, ((c, d), (a, b)), self.name + "~swap")

    def grid(self, n: int, m: int | None = None) -> list[tuple[float, float]]:
        """Cell-centred ``n x m`` sample points of the domain."""
        m = n if m is None else m
        (u0, u1), (v0, v1) = self.domain
        us = u0 + (np.arange(n) + 0.5) * (u1 - u0) / n
        vs = v0 + (np.arange(m) + 0.5) * (v1 - v0) / m
        return [(float(u), float(v)) for u in us for v in vs]


@dataclass(frozen=True)
class FundamentalData:
    """Values of the surface geometry at one point.

    Vectors are horizontal lifts at ``z``; matrix quantities are written in the
    orthonormal tangent frame ``E`` (Gram-Schmidt of ``d_u``, ``d_v``) and the
    orthonormal normal frame ``normals`` (Gram-Schmidt of H, JE1, JE2, then
    coordinate directions).
    """

    z: np.ndarray
    g: np.ndarray
    E: np.ndarray
    normals: np.ndarray
    sigma_vec: np.ndarray  # (2, 2, n+1): sigma(E_a, E_b)
    A: np.ndarray  # (n_normals, 2, 2): A_alpha in the E frame
    H: np.ndarray
    nablaperpH: np.ndarray  # (2, n+1): normal derivative of H along E_1, E_2
    T: np.ndarray
    Ncomp: np.ndarray
    cos_theta: float
    K_intrinsic: float
    K_gauss: float

    @property
    def sigma(self) -> np.ndarray:
        return self.A

    @property
    def h2(self) -> float:
        return float(np.real(np.vdot(self.H, self.H)))

    @property
    def h_norm(self) -> float:
        return float(np.sqrt(self.h2))

    @property
    def t_tangent(self) -> np.ndarray:
        """Components of T in the frame ``E``."""
        return np.real(self.E.conj() @ self.T)

    @property
    def t2(self) -> float:
        return float(np.real(np.vdot(self.T, self.T)))

    @property
    def n2(self) -> float:
        return float(np.real(np.vdot(self.Ncomp, self.Ncomp)))

    @property
    def a_h(self) -> np.ndarray:
        """Shape operator A_H in the frame ``E``."""
        return np.real(np.einsum("abk,k->ab", self.sigma_vec, self.H.conj()))

    @property
    def K(self) -> float:
        return self.K_intrinsic

    def shape_operator(self, V) -> np.ndarray:
        return np.real(np.einsum("abk,k->ab", self.sigma_vec, np.conj(V)))

    def summary(self) -> dict:
        return {
            "K": self.K_intrinsic,
            "K_gauss": self.K_gauss,
            "H": self.h_norm,
            "T": np.sqrt(self.t2),
            "N": np.sqrt(self.n2),
            "cos_theta": self.cos_theta,
            "pmc": float(np.linalg.norm(self.nablaperpH[0]) + np.linalg.norm(self.nablaperpH[1])),
        }


class SurfacePoint:
    """Jet-level geometry of a chart at ``(u, v)``.

    ``order`` is the jet order of the lift; 3 suffices for :class:`FundamentalData`
    and the pmc residual, the normal Laplacian of H and the Laplacian of |S|^2
    need 4.
    """

    def __init__(self, chart: Chart, u: float, v: float, order: int = 4):
        self.chart, self.u, self.v, self.order = chart, float(u), float(v), order
        rho = self.rho = chart.rho
        f = C.eval_jet(chart.map, u, v, order)
        norm2 = C.re_dot(f, f)
        if norm2.value <= 0:
            raise DegenerateError(f"chart vanishes at ({u}, {v})")
        z = self.z = f * (2.0 / np.sqrt(rho) / C.sqrt(norm2))
        self.dz = [z.d(0), z.d(1)]
        X = self.X = [horizontal(z, dz, rho) for dz in self.dz]
        g = self.g = [[C.re_dot(X[k], X[l]) for l in range(2)] for k in range(2)]
        det = g[0][0] * g[1][1] - g[0][1] * g[0][1]
        scale = g[0][0].value * g[1][1].value
        if not det.value > RANK_TOL * max(scale, 1.0):
            raise ImmersionError(f"tangent map has rank < 2 at ({u}, {v})")
        inv = 1.0 / det
        self.ginv = [[g[1][1] * inv, -g[0][1] * inv], [-g[0][1] * inv, g[0][0] * inv]]
        # D_k X_l: the ambient Levi-Civita derivative of the tangent lifts
        DX = self.DX = [[self.D(k, X[l]) for l in range(2)] for k in range(2)]
        G = self.gamma = [
            [[sum(self.ginv[m][p] * C.re_dot(DX[k][l], X[p]) for p in range(2)) for l in range(2)] for k in range(2)]
            for m in range(2)
        ]
        self.sig = [[DX[k][l] - G[0][k][l] * X[0] - G[1][k][l] * X[1] for l in range(2)] for k in range(2)]
        ginv = self.ginv
        self.H = 0.5 * sum(ginv[k][l] * self.sig[k][l] for k in range(2) for l in range(2))

    # -- differential operators on jets -----------------------------------------
    def D(self, k: int, w: Jet) -> Jet:
        """Ambient covariant derivative of the horizontal field ``w`` along ``d_k``."""
        return covariant_derivative(self.z, self.dz[k], w, w.d(k), self.rho)

    def tangential(self, w: Jet) -> Jet:
        c = [C.re_dot(w, self.X[p]) for p in range(2)]
        return sum(self.ginv[m][p] * c[p] * self.X[m] for m in range(2) for p in range(2))

    def normal(self, w: Jet) -> Jet:
        return w - self.tangential(w)

    def nabla_perp(self, k: int, w: Jet) -> Jet:
        return self.normal(self.D(k, w))

    @cached_property
    def nperpH(self) -> list[Jet]:
        return [self.nabla_perp(k, self.H) for k in range(2)]

    @cached_property
    def frame(self) -> list[list[Jet]]:
        """Coefficients ``F[a][k]`` with ``E_a = sum_k F[a][k] X_k`` (jets)."""
        g = self.g
        n0 = 1.0 / C.sqrt(g[0][0])
        # E2 = (X1 - <X1,E1> E1) / |...|
        c = g[0][1] * n0 * n0
        len2 = g[1][1] - c * g[0][1]
        n1 = 1.0 / C.sqrt(len2)
        return [[n0, 0.0 * n0], [-c * n1, n1]]

    @cached_property
    def E(self) -> list[Jet]:
        F = self.frame
        return [F[a][0] * self.X[0] + F[a][1] * self.X[1] for a in range(2)]

    def frame_matrix(self) -> np.ndarray:
        return np.array([[self.frame[a][k].value for k in range(2)] for a in range(2)])

    # -- intrinsic curvature from the metric alone ----------------------------------
    @cached_property
    def K_intrinsic(self) -> float:
        g, ginv = self.g, self.ginv
        dg = [[[g[i][j].d(k) for k in range(2)] for j in range(2)] for i in range(2)]
        gam = [
            [
                [0.5 * sum(ginv[m][p] * (dg[p][l][k] + dg[p][k][l] - dg[k][l][p]) for p in range(2)) for l in range(2)]
                for k in range(2)
            ]
            for m in range(2)
        ]

        def riem(l, i, j, k):  # component l of R(d_i, d_j) d_k
            val = gam[l][j][k].d(i) - gam[l][i][k].d(j)
            for m in range(2):
                val = val + gam[m][j][k] * gam[l][i][m] - gam[m][i][k] * gam[l][j][m]
            return val.value

        r1212 = sum(g[0][l].value * riem(l, 0, 1, 1) for l in range(2))
        det = g[0][0].value * g[1][1].value - g[0][1].value ** 2
        return float(r1212 / det)

    # -- assembled values -------------------------------------------------------------
    @cached_property
    def sigma_frame(self) -> np.ndarray:
        F = self.frame_matrix()
        sig = np.array([[self.sig[k][l].value for l in range(2)] for k in range(2)])
        return np.einsum("ak,bl,klx->abx", F, F, sig)

    @cached_property
    def normal_frame(self) -> np.ndarray:
        E = np.array([e.value for e in self.E])
        z = self.z.value
        dim = z.shape[0]
        n_normals = 2 * (dim - 1) - 2
        H = self.H.value
        seeds = []
        if np.linalg.norm(H) > MINIMAL_TOL:
            seeds.append(H)
        seeds += [1j * E[0], 1j * E[1]]
        for k in range(dim):
            e = np.zeros(dim, dtype=complex)
            e[k] = 1.0
            seeds += [e, 1j * e]
        basis: list[np.ndarray] = []
        for s in seeds:
            w = horizontal(z, s, self.rho)
            w = w - sum(np.real(np.vdot(b, w)) * b for b in list(E) + basis)
            nrm = np.linalg.norm(w)
            if nrm > 1e-8:
                basis.append(w / nrm)
            if len(basis) == n_normals:
                break
        return np.array(basis).reshape(n_normals, dim)

    @cached_property
    def fundamental(self) -> FundamentalData:
        rho = self.rho
        E = np.array([e.value for e in self.E])
        H = self.H.value
        nu = self.normal_frame
        sig = self.sigma_frame
        A = np.real(np.einsum("abx,nx->nab", sig, nu.conj()))
        F = self.frame_matrix()
        npH = np.array([self.nperpH[k].value for k in range(2)])
        npH_E = F.astype(complex) @ npH
        JH = 1j * H
        t_comp = np.real(E.conj() @ JH)
        T = t_comp @ E
        cos_theta = float(np.real(np.vdot(E[1], 1j * E[0])))
        R1221 = float(np.real(np.vdot(E[0], curvature_lift(rho, E[0], E[1], E[1]))))
        K_gauss = R1221 + float(np.real(np.vdot(sig[1, 1], sig[0, 0]))) - float(np.real(np.vdot(sig[0, 1], sig[0, 1])))
        g = np.array([[self.g[k][l].value for l in range(2)] for k in range(2)])
        return FundamentalData(
            z=self.z.value,
            g=g,
            E=E,
            normals=nu,
            sigma_vec=sig,
            A=A,
            H=H,
            nablaperpH=npH_E,
            T=T,
            Ncomp=JH - T,
            cos_theta=cos_theta,
            K_intrinsic=self.K_intrinsic,
            K_gauss=K_gauss,
        )


def fundamental_data(chart: Chart, u: float, v: float) -> FundamentalData:
    return SurfacePoint(chart, u, v, order=3).fundamental


def _as_grid(chart: Chart, grid) -> list[tuple[float, float]]:
    if isinstance(grid, int):
        return chart.grid(grid)
    return [(float(u), float(v)) for u, v in grid]


def pmc_value(fd: FundamentalData) -> float:
    return float(np.linalg.norm(fd.nablaperpH[0]) + np.linalg.norm(fd.nablaperpH[1]))


def pmc_residual(chart: Chart, grid) -> float:
    """Sup over the grid of ``|nabla^perp_{E1} H| + |nabla^perp_{E2} H|``."""
    return max(pmc_value(fundamental_data(chart, u, v)) for u, v in _as_grid(chart, grid))


def _normal_gram(fd: FundamentalData) -> np.ndarray:
    # basis-free summary of the shape operators: sum_alpha A_alpha (x) A_alpha
    return np.einsum("nab,ncd->abcd", fd.A, fd.A)


def fundamental_discrepancy(a: FundamentalData, b: FundamentalData, phase: complex = 1.0) -> float:
    """Max difference of two FundamentalData, ``b`` being expected as ``phase * a`` on lifts."""
    back = np.conj(phase)
    diffs = [
        np.abs(a.g - b.g).max(),
        np.abs(a.E - back * b.E).max(),
        np.abs(a.H - back * b.H).max(),
        np.abs(a.T - back * b.T).max(),
        np.abs(a.Ncomp - back * b.Ncomp).max(),
        np.abs(a.sigma_vec - back * b.sigma_vec).max(),
        np.abs(a.nablaperpH - back * b.nablaperpH).max(),
        np.abs(_normal_gram(a) - _normal_gram(b)).max(),
        abs(a.cos_theta - b.cos_theta),
        abs(a.K_intrinsic - b.K_intrinsic),
        abs(a.K_gauss - b.K_gauss),
    ]
    return float(max(diffs))


def gauge_invariance_check(chart: Chart, phase: Callable, u: float, v: float) -> float:
    """Max discrepancy of FundamentalData between ``chart`` and its regauged copy."""
    a = fundamental_data(chart, u, v)
    b = fundamental_data(chart.regauged(phase), u, v)
    ph = np.exp(1j * np.real(phase(u, v)))
    return fundamental_discrepancy(a, b, ph)


GRID_COLUMNS = ["u", "v", "K", "K_gauss", "H", "T", "N", "cos_theta", "pmc"]


def grid_report(chart: Chart, grid) -> list[dict]:
    """One row per sample: curvature, |H|, |T|, |N|, Kaehler angle and pmc residual."""
    rows = []
    for u, v in _as_grid(chart, grid):
        row = {"u": u, "v": v}
        row.update(fundamental_data(chart, u, v).summary())
        rows.append({k: float(row[k]) for k in GRID_COLUMNS})
    return rows


def write_grid_report(rows: Sequence[dict], path, fmt: str = "csv") -> None:
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(rows, fh, indent=2)
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(GRID_COLUMNS)
        for r in rows:
            w.writerow([f"{r[k]:.17g}" for k in GRID_COLUMNS])
