"""Biharmonicity residuals for surfaces and the closed-form algebra of flat biharmonic pmc surfaces."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import calculus as C
from .errors import DomainError, InconsistencyError
from .projective import curvature_lift
from .surfaces import Chart, SurfacePoint

PMC_TOL = 1e-8
PROPER_TOL = 1e-8


def _trace_curvature(rho: float, E: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``sum_a R(E_a, V) E_a`` on lifts."""
    return sum(curvature_lift(rho, E[a], V, E[a]) for a in range(2))


@dataclass(frozen=True)
class BitensionTerms:
    normal: np.ndarray
    tangent: np.ndarray
    direct: np.ndarray  # the full bitension field of tau = 2H, assembled without splitting; equals -2 (normal + tangent)

    @property
    def normal_residual(self) -> float:
        return float(np.linalg.norm(self.normal))

    @property
    def tangent_residual(self) -> float:
        return float(np.linalg.norm(self.tangent))


def bitension_terms(sp: SurfacePoint) -> BitensionTerms:
    """Left-hand sides of the normal and tangent biharmonic equations at a point."""
    rho, ginv, gam = sp.rho, sp.ginv, sp.gamma
    gi = [[ginv[k][l].value for l in range(2)] for k in range(2)]
    G = [[[gam[m][k][l].value for l in range(2)] for k in range(2)] for m in range(2)]
    E = np.array([e.value for e in sp.E])
    F = sp.frame_matrix()
    H = sp.H.value
    npH = [w.value for w in sp.nperpH]

    # rough normal Laplacian of H
    lap = 0
    for k in range(2):
        for l in range(2):
            nn = sp.nabla_perp(k, sp.nperpH[l]).value
            lap = lap + gi[k][l] * (nn - G[0][k][l] * npH[0] - G[1][k][l] * npH[1])

    sig = sp.sigma_frame
    a_h = np.real(np.einsum("abx,x->ab", sig, H.conj()))
    tr_sigma_ah = np.einsum("ab,abx->x", a_h, sig)
    trR = _trace_curvature(rho, E, H)
    trR_tan = sum(np.real(np.vdot(E[a], trR)) * E[a] for a in range(2))
    normal = -lap + tr_sigma_ah + (trR - trR_tan)

    h2 = C.re_dot(sp.H, sp.H)
    grad = sum(gi[k][l] * h2.d(l).value * sp.X[k].value for k in range(2) for l in range(2))
    npH_E = F.astype(complex) @ np.array(npH)
    trace_A = sum(np.real(np.vdot(npH_E[a], sig[a, b])) * E[b] for a in range(2) for b in range(2))
    tangent = grad + 2 * trace_A + 2 * trR_tan

    # bitension computed directly: trace nabla^2 tau - sum R(E_a, tau) E_a, tau = 2H
    tau = 2.0 * sp.H
    Dtau = [sp.D(k, tau) for k in range(2)]
    rough = 0
    for k in range(2):
        for l in range(2):
            DD = sp.D(k, Dtau[l]).value
            rough = rough + gi[k][l] * (DD - G[0][k][l] * Dtau[0].value - G[1][k][l] * Dtau[1].value)
    direct = rough - _trace_curvature(rho, E, tau.value)
    return BitensionTerms(normal=normal, tangent=tangent, direct=direct)


def bitension_residual(chart: Chart, u: float, v: float) -> tuple[float, float]:
    """Norms of the normal and tangent parts of the biharmonic equation."""
    t = bitension_terms(SurfacePoint(chart, u, v, order=4))
    return t.normal_residual, t.tangent_residual


@dataclass(frozen=True)
class PmcBiharmonicResidual:
    trace_residual: float  # |trace sigma(., A_H .) - (rho/4)(2H - 3 (JT)^perp)|
    jt_tangent: float  # |(JT)^T|
    ah_identity: float  # ||A_H|^2 - (rho/4)(2|H|^2 + 3|T|^2)|
    pmc: float
    h_norm: float
    warnings: tuple = ()

    @property
    def proper(self) -> bool:
        return self.h_norm > PROPER_TOL

    def passes(self, tol: float) -> bool:
        return max(self.trace_residual, self.jt_tangent, self.ah_identity) < tol


def pmc_biharmonic_residual(chart: Chart, u: float, v: float) -> PmcBiharmonicResidual:
    """Residuals of the pmc form of the biharmonic equations and of the |A_H|^2 identity."""
    return pmc_biharmonic_from_data(SurfacePoint(chart, u, v, order=3).fundamental, chart.rho)


def pmc_biharmonic_from_data(fd, rho: float) -> PmcBiharmonicResidual:
    sig, H, E = fd.sigma_vec, fd.H, fd.E
    a_h = fd.a_h
    tr_sigma_ah = np.einsum("ab,abx->x", a_h, sig)
    JT = 1j * fd.T
    JT_tan = sum(np.real(np.vdot(E[a], JT)) * E[a] for a in range(2))
    JT_perp = JT - JT_tan
    lhs = tr_sigma_ah - rho / 4 * (2 * H - 3 * JT_perp)
    ident = float(np.sum(a_h**2)) - rho / 4 * (2 * fd.h2 + 3 * fd.t2)
    pmc = float(np.linalg.norm(fd.nablaperpH[0]) + np.linalg.norm(fd.nablaperpH[1]))
    warns = []
    if pmc > PMC_TOL:
        warns.append(f"surface is not pmc here (|nabla^perp H| = {pmc:.3g})")
    if fd.h_norm <= PROPER_TOL:
        warns.append("H vanishes: minimal, hence not proper-biharmonic")
    return PmcBiharmonicResidual(
        trace_residual=float(np.linalg.norm(lhs)),
        jt_tangent=float(np.linalg.norm(JT_tan)),
        ah_identity=abs(ident),
        pmc=pmc,
        h_norm=fd.h_norm,
        warnings=tuple(warns),
    )


# -- closed-form algebra of the non-Lagrangian flat case ---------------------------------


@dataclass(frozen=True)
class CaseIIData:
    """Shape-operator data of a flat totally real biharmonic pmc surface with 0 < |T| < |H|.

    Matrices are in the parallel frame ``E1 = T/|T|, E2`` and the normal frame
    ``E3 = JE1, E4 = JE2, E5 = JN/|N|, E6 = N/|N|``, so that ``H = -|T| E3 - |N| E5``.
    """

    rho: float
    H2: float
    T2: float
    N2: float
    a: float
    b: float
    c: float
    d: float
    A3: np.ndarray
    A4: np.ndarray
    A5: np.ndarray
    A6: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def h2(self) -> float:
        return self.H2

    @property
    def t2(self) -> float:
        return self.T2

    @property
    def a_h(self) -> np.ndarray:
        return -math.sqrt(self.T2) * self.A3 - math.sqrt(self.N2) * self.A5

    @property
    def t_tangent(self) -> np.ndarray:
        return np.array([math.sqrt(self.T2), 0.0])

    @property
    def cos_theta(self) -> float:
        return 0.0

    @property
    def shape_operators(self) -> list[np.ndarray]:
        return [self.A3, self.A4, self.A5, self.A6]

    @property
    def A(self) -> np.ndarray:
        """Shape operators in the normal frame ``H/|H|, (-|N|E3 + |T|E5)/|H|, E4, E6``."""
        T, N, h = math.sqrt(self.T2), math.sqrt(self.N2), math.sqrt(self.H2)
        return np.array([
            (-T * self.A3 - N * self.A5) / h,
            (-N * self.A3 + T * self.A5) / h,
            self.A4,
            self.A6,
        ])

    @property
    def K_gauss(self) -> float:
        return self.gauss_curvature()

    def gauss_curvature(self) -> float:
        """``rho/4 + sum det A_alpha`` (totally real, so the ambient plane has curvature rho/4)."""
        return self.rho / 4 + sum(float(np.linalg.det(A)) for A in self.shape_operators)

    def sigma(self, i: int, j: int) -> np.ndarray:
        """Components of sigma(E_i, E_j) along (E3, E4, E5, E6)."""
        return np.array([A[i, j] for A in self.shape_operators])

    def printed_A5(self) -> np.ndarray:
        """A5 with the diagonal signs as typeset in the source table (trace -|N|/3 instead of -2|N|)."""
        return -0.5 * math.sqrt(5 * self.rho / 3) * np.diag([-1 / 3, 1.0])

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("A3", "A4", "A5", "A6"):
            d[k] = np.asarray(d[k]).tolist()
        d["K_gauss"] = self.gauss_curvature()
        return d


def eq8(rho: float, H2: float, T2: float) -> float:
    return 16 * H2**2 - 10 * rho * H2 - 3 * rho * T2 + 2 * rho**2


def eq9(rho: float, H2: float, T2: float) -> float:
    return 16 * H2**2 + 4 * rho * H2 - 48 * T2 * H2 + 22 * rho * T2 - 4 * rho**2


def case_ii_residuals(rho, H2, T2, a, b, c, d) -> dict:
    """Residuals of the defining equations, each normalized to vanish at a solution."""
    T, N = math.sqrt(T2), math.sqrt(max(H2 - T2, 0.0))
    return {
        "eq1": a * d - b * c,
        "eq2": b * (b * T + d * N) + (a + T) * (a * T + c * N) - rho / 8 * T,
        "eq3": b * T + d * N,
        "eq4": (a + T) * (a * T + c * N) - rho / 8 * T,
        "eq5": a * (a * T + c * N) - (5 * rho - 8 * H2) * T / 8,
        "eq6": c * (a * T + c * N) - (rho - 4 * H2) * N / 4,
        "eq7a": a - (5 * rho - 8 * H2) * T / (4 * (2 * H2 - rho)),
        "eq7c": c - (rho - 4 * H2) * N / (2 * (2 * H2 - rho)),
        "eq8": eq8(rho, H2, T2),
        "eq9": eq9(rho, H2, T2),
    }


def solve_case_ii(rho: float) -> CaseIIData:
    """Solve the flatness/biharmonicity system for |H|^2, |T|^2 and the shape operators."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    # eq8 gives T2 as a quadratic in H2; substituting into eq9 leaves a cubic in H2
    T2_of = np.polynomial.Polynomial([2 * rho**2, -10 * rho, 16]) / (3 * rho)
    H2p = np.polynomial.Polynomial([0, 1])
    cubic = 16 * H2p**2 + 4 * rho * H2p - 48 * T2_of * H2p + 22 * rho * T2_of - 4 * rho**2
    candidates = []
    for root in cubic.roots():
        if abs(root.imag) > 1e-9 * rho:
            continue
        H2 = float(root.real)
        T2 = float(T2_of(H2))
        gap = 1e-9 * rho
        if 0 < T2 < H2 - gap and abs(2 * H2 - rho) > gap:
            candidates.append((H2, T2))
    if len(candidates) != 1:
        raise InconsistencyError(f"expected one admissible root with 0 < |T|^2 < |H|^2, found {candidates}")
    H2, T2 = candidates[0]
    # polish on the pair of polynomial equations
    for _ in range(3):
        J = np.array([[32 * H2 - 10 * rho, -3 * rho], [32 * H2 + 4 * rho - 48 * T2, 22 * rho - 48 * H2]])
        r = np.array([eq8(rho, H2, T2), eq9(rho, H2, T2)])
        H2, T2 = np.array([H2, T2]) - np.linalg.solve(J, r)
    H2, T2 = float(H2), float(T2)
    N2 = H2 - T2
    T, N = math.sqrt(T2), math.sqrt(N2)
    a = (5 * rho - 8 * H2) * T / (4 * (2 * H2 - rho))
    c = (rho - 4 * H2) * N / (2 * (2 * H2 - rho))
    b = d = 0.0
    A3 = np.array([[a - T, b], [b, -a - T]])
    A4 = np.array([[b, -a - T], [-a - T, -b]])
    A5 = np.array([[c - N, d], [d, -c - N]])
    A6 = np.zeros((2, 2))
    return CaseIIData(rho, H2, T2, N2, a, b, c, d, A3, A4, A5, A6, case_ii_residuals(rho, H2, T2, a, b, c, d))


def case_i_mean_curvature(rho: float) -> float:
    """|H| of a pseudo-umbilical biharmonic pmc surface with T = 0."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    return math.sqrt(rho) / 2


def case_i_consistency(rho: float) -> float:
    """``|2|H|^4 - (rho/2)|H|^2|`` at the Case-I mean curvature."""
    h2 = case_i_mean_curvature(rho) ** 2
    return abs(2 * h2**2 - rho / 2 * h2)
