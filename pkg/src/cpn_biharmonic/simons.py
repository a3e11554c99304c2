"""The quadratic form Q, its traceless operator S, the Simons identity and the |S| bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import calculus as C
from .errors import DomainError, MinimalPointError
from .surfaces import MINIMAL_TOL, Chart, FundamentalData, SurfacePoint


def q_form(data, rho: float) -> np.ndarray:
    """``Q(E_a, E_b) = 8|H|^2 <A_H E_a, E_b> + 3 rho <E_a, T><E_b, T>``.

    ``data`` is anything exposing ``h2``, ``a_h`` and ``t_tangent`` (FundamentalData
    or CaseIIData).
    """
    t = np.asarray(data.t_tangent, dtype=float)
    return 8 * data.h2 * np.asarray(data.a_h) + 3 * rho * np.outer(t, t)


@dataclass(frozen=True)
class SimonsState:
    Q: np.ndarray
    S: np.ndarray
    phiH: np.ndarray
    normS: float
    bound: float
    sq_consistency: float  # max |S - (Q - tr Q/2 id)|, S built from its own formula

    @property
    def normS2(self) -> float:
        return self.normS**2


def s_matrix(data, rho: float) -> np.ndarray:
    """``S = 8|H|^2 A_H + 3 rho <T, .> T - (3 rho/2 |T|^2 + 8 |H|^4) id``."""
    t = np.asarray(data.t_tangent, dtype=float)
    h2 = data.h2
    return 8 * h2 * np.asarray(data.a_h) + 3 * rho * np.outer(t, t) - (1.5 * rho * t @ t + 8 * h2**2) * np.eye(2)


def s_operator(data, rho: float) -> SimonsState:
    Q = q_form(data, rho)
    S = s_matrix(data, rho)
    from_q = Q - np.trace(Q) / 2 * np.eye(2)
    h2 = data.h2
    phi = np.asarray(data.a_h) - h2 * np.eye(2)
    bound = s_bound(rho, h2) if h2 > 0 and rho != 0 else math.nan
    return SimonsState(
        Q=Q,
        S=S,
        phiH=phi,
        normS=float(np.linalg.norm(S)),
        bound=bound,
        sq_consistency=float(np.abs(S - from_q).max()),
    )


def s_bound(rho: float, H2: float) -> float:
    """Upper bound for |S| on a pmc surface with K >= 0 (formula depends on the sign of rho)."""
    if rho == 0:
        raise DomainError("the bound is stated for rho != 0")
    if H2 <= 0:
        raise DomainError("the bound needs |H|^2 > 0")
    if rho < 0:
        return (math.sqrt(9 * rho**2 + 256 * H2**2) - 3 * rho) * H2 / math.sqrt(2)
    return (math.sqrt(9 * rho**2 + 256 * rho * H2 + 256 * H2**2) + 3 * rho) * H2 / math.sqrt(2)


def st_ratio(data, state: SimonsState) -> float:
    """``|<ST, T>| / (|T|^2 |S|)``, the quantity the bound derivation estimates by 1/sqrt(2)."""
    t = np.asarray(data.t_tangent, dtype=float)
    denom = (t @ t) * state.normS
    return abs(t @ state.S @ t) / denom if denom > 0 else 0.0


def k_formula(data: FundamentalData, state: SimonsState, rho: float) -> float:
    """Gaussian curvature written through |S|, |T|, <ST,T> and the remaining shape operators."""
    h2 = data.h2
    if math.sqrt(h2) <= MINIMAL_TOL:
        raise MinimalPointError("the curvature formula divides by |H|^6")
    t = np.asarray(data.t_tangent, dtype=float)
    h6 = h2**3
    # the normal frame starts with H/|H|, so the rest are the alpha > 3 directions
    rest = sum(float(np.linalg.det(A)) for A in data.A[1:])
    return (
        rho / 4 * (1 + 3 * data.cos_theta**2)
        + h2
        - state.normS2 / (128 * h6)
        - 9 * rho**2 * (t @ t) ** 2 / (256 * h6)
        + 3 * rho * (t @ state.S @ t) / (64 * h6)
        + rest
    )


def k_formula_residual(data: FundamentalData, simons: SimonsState, rho: float) -> float:
    return abs(k_formula(data, simons, rho) - data.K_gauss)


# -- derivatives of the S field ---------------------------------------------------------


class SField:
    """Jets of S in chart coordinates: ``S_kl = Q_kl - (tr Q / 2) g_kl``."""

    def __init__(self, sp: SurfacePoint):
        self.sp = sp
        rho = sp.rho
        H, X = sp.H, sp.X
        h2 = C.re_dot(H, H)
        t = [C.re_dot(X[k], 1j * H) for k in range(2)]
        Q = [[8 * h2 * C.re_dot(sp.sig[k][l], H) + 3 * rho * t[k] * t[l] for l in range(2)] for k in range(2)]
        ginv, g = sp.ginv, sp.g
        trQ = sum(ginv[k][l] * Q[k][l] for k in range(2) for l in range(2))
        self.Q = Q
        self.S = [[Q[k][l] - 0.5 * trQ * g[k][l] for l in range(2)] for k in range(2)]
        self.norm2 = sum(ginv[k][i] * ginv[l][j] * self.S[k][l] * self.S[i][j]
                         for k in range(2) for l in range(2) for i in range(2) for j in range(2))

    def covariant(self) -> list:
        """``nabla_m S_kl`` as jets (index order m, k, l)."""
        G, S = self.sp.gamma, self.S
        return [
            [
                [S[k][l].d(m) - sum(G[p][m][k] * S[p][l] + G[p][m][l] * S[k][p] for p in range(2)) for l in range(2)]
                for k in range(2)
            ]
            for m in range(2)
        ]

    def _contract3(self, T) -> float:
        gi = [[self.sp.ginv[k][l].value for l in range(2)] for k in range(2)]
        vals = np.array([[[T[m][k][l].value for l in range(2)] for k in range(2)] for m in range(2)])
        gi = np.array(gi)
        return float(np.einsum("ma,kb,lc,mkl,abc->", gi, gi, gi, vals, vals))

    def grad_norm2(self) -> float:
        """|nabla S|^2."""
        return self._contract3(self.covariant())

    def codazzi_defect(self) -> float:
        """Norm of ``(nabla_m S)_kl - (nabla_k S)_ml``."""
        nS = self.covariant()
        diff = [[[nS[m][k][l] - nS[k][m][l] for l in range(2)] for k in range(2)] for m in range(2)]
        return math.sqrt(max(self._contract3(diff), 0.0))

    def laplacian_norm2(self) -> float:
        """Laplace-Beltrami of |S|^2 from its jet."""
        sp, f = self.sp, self.norm2
        df = [f.d(k) for k in range(2)]
        return float(sum(
            sp.ginv[k][l].value * (df[l].d(k).value - sum(sp.gamma[m][k][l].value * df[m].value for m in range(2)))
            for k in range(2) for l in range(2)
        ))


def laplacian_fd(chart: Chart, u: float, v: float, h: float = 1e-3) -> float:
    """Finite-difference cross-check of the Laplacian of |S|^2 (metric terms from jets)."""
    def f(a, b):
        return SField(SurfacePoint(chart, u + a * h, v + b * h, order=2)).norm2.value

    sp = SurfacePoint(chart, u, v, order=3)
    f0 = f(0, 0)
    d2 = [[(f(1, 0) - 2 * f0 + f(-1, 0)) / h**2, (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h**2)], [0, 0]]
    d2[1][0] = d2[0][1]
    d2[1][1] = (f(0, 1) - 2 * f0 + f(0, -1)) / h**2
    d1 = [(f(1, 0) - f(-1, 0)) / (2 * h), (f(0, 1) - f(0, -1)) / (2 * h)]
    return float(sum(
        sp.ginv[k][l].value * (d2[k][l] - sum(sp.gamma[m][k][l].value * d1[m] for m in range(2)))
        for k in range(2) for l in range(2)
    ))


@dataclass(frozen=True)
class SimonsResidual:
    residual: float  # (1/2) Delta|S|^2 - 2K|S|^2 - |nabla S|^2
    grad_norm: float  # |nabla S|
    laplacian: float  # Delta|S|^2
    codazzi: float
    K: float
    normS: float


def simons_terms(chart: Chart, u: float, v: float) -> SimonsResidual:
    sp = SurfacePoint(chart, u, v, order=4)
    sf = SField(sp)
    lap = sf.laplacian_norm2()
    grad2 = sf.grad_norm2()
    K = sp.K_intrinsic
    s2 = float(sf.norm2.value)
    return SimonsResidual(
        residual=0.5 * lap - 2 * K * s2 - grad2,
        grad_norm=math.sqrt(max(grad2, 0.0)),
        laplacian=lap,
        codazzi=sf.codazzi_defect(),
        K=K,
        normS=math.sqrt(max(s2, 0.0)),
    )


def simons_residual(chart: Chart, u: float, v: float) -> tuple[float, float, float]:
    """``((1/2)Delta|S|^2 - 2K|S|^2 - |nabla S|^2, |nabla S|, Delta|S|^2)``."""
    r = simons_terms(chart, u, v)
    return r.residual, r.grad_norm, r.laplacian


FLAT_TOL = 1e-8


def cauchy_riemann_defect(chart: Chart, u: float, v: float) -> float:
    """|d/dzbar Q(d_z, d_z)| in linear orthonormal coordinates of a chart with constant metric.

    Raises :class:`DomainError` if the induced metric is not constant at the point.
    """
    sp = SurfacePoint(chart, u, v, order=3)
    dg = max(abs(sp.g[i][j].d(k).value) for i in range(2) for j in range(2) for k in range(2))
    if dg > FLAT_TOL:
        raise DomainError("Cauchy-Riemann check needs a chart with constant induced metric")
    sf = SField(sp)
    g = np.array([[sp.g[k][l].value for l in range(2)] for k in range(2)])
    P = np.linalg.inv(np.linalg.cholesky(g).T)  # (u, v) = P xi gives an orthonormal xi
    Qxi = [[sum(P[k][a] * P[l][b] * sf.Q[k][l] for k in range(2) for l in range(2)) for b in range(2)] for a in range(2)]
    phi = 0.25 * (Qxi[0][0] - Qxi[1][1] - 2j * Qxi[0][1])
    dphi = [sum(P[k][a] * phi.d(k).value for k in range(2)) for a in range(2)]
    return float(abs(0.5 * (dphi[0] + 1j * dphi[1])))
