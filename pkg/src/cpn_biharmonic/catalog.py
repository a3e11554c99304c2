"""Named examples: the biharmonic tori in CP^2(4), control surfaces, the helices and the flat non-Lagrangian surface."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import calculus as C
from .biharmonic import CaseIIData, solve_case_ii
from .curves import CurveSpec, Frame, circle_spec, helix_spec
from .errors import DomainError, IntegrabilityError
from .surfaces import Chart, FundamentalData

TWO_PI = 2 * math.pi
BRANCHES = ("plus", "minus")


# -- tori in CP^2 -----------------------------------------------------------------------


def torus_radii(branch: str = "plus") -> tuple[float, float, float]:
    """Squared radii ``(r1^2, r2^2, r3^2)`` of the biharmonic torus on the given branch."""
    if branch not in BRANCHES:
        raise DomainError(f"branch must be one of {BRANCHES}")
    s = 1 if branch == "plus" else -1
    r41 = math.sqrt(41)
    r1 = (9 + s * r41) / 20
    r2 = (11 - s * r41) / 40
    return r1, r2, r2


def torus_mean_curvature2(branch: str = "plus", rho: float = 4.0) -> float:
    """Predicted |H|^2 of the biharmonic torus."""
    s = 1 if branch == "plus" else -1
    return rho * (13 + s * math.sqrt(41)) / 32


def perturbed_torus(r1sq: float, r2sq: float, r3sq: float, name: str = "torus") -> Chart:
    """``(u, v) -> (r1 e^{iu}, r2 e^{iv}, r3)`` in CP^2(4); requires ``r1^2 + r2^2 + r3^2 = 1``."""
    radii = np.array([r1sq, r2sq, r3sq], dtype=float)
    if np.any(radii <= 0):
        raise DomainError("squared radii must be positive")
    if abs(radii.sum() - 1.0) > 1e-12:
        raise DomainError(f"squared radii must sum to 1, got {radii.sum():.17g}")
    r = np.sqrt(radii)

    def lift(u, v):
        return C.stack([r[0] * C.exp(1j * u), r[1] * C.exp(1j * v), r[2] + 0 * u])

    return Chart(lift, 4.0, ((0.0, TWO_PI), (0.0, TWO_PI)), name)


def torus_cp2(branch: str = "plus") -> Chart:
    return perturbed_torus(*torus_radii(branch), name=f"torus-{branch}")


def clifford_torus() -> Chart:
    """The minimal torus with equal radii (a negative control)."""
    return perturbed_torus(1 / 3, 1 / 3, 1 / 3, name="clifford")


# -- control charts ---------------------------------------------------------------------


def cp1_chart(rho: float = 4.0) -> Chart:
    """A complex line: totally geodesic, K = rho."""
    return Chart(lambda u, v: C.stack([1.0 + 0 * u, u + 1j * v, 0 * u]), rho, ((-0.5, 0.5), (-0.5, 0.5)), "CP1")


def rp2_chart(rho: float = 4.0) -> Chart:
    """A totally geodesic RP^2: K = rho/4."""
    return Chart(lambda u, v: C.stack([1.0 + 0 * u, u + 0j, v + 0j]), rho, ((-0.5, 0.5), (-0.5, 0.5)), "RP2")


def generic_chart(rho: float = 4.0) -> Chart:
    """A non-pmc, non-biharmonic surface used as a negative control."""
    return Chart(lambda u, v: C.stack([1.0 + 0 * u, u + 1j * v, u * u + 0j]), rho, ((-0.5, 0.5), (-0.5, 0.5)), "generic")


# -- curves -----------------------------------------------------------------------------


def gamma1_curvatures(rho: float) -> tuple[float, float, float]:
    """Curvatures of the order-4 helix that pairs with a circle in the product construction."""
    k1 = math.sqrt(7 * rho / 6)
    k2 = 0.5 * math.sqrt(5 * rho / 42)
    k3 = 1.5 * math.sqrt(rho / 42)
    return k1, k2, k3


def gamma_specs(rho: float = 6.0, n: int = 2) -> tuple[tuple[CurveSpec, Frame], tuple[CurveSpec, Frame]]:
    """``gamma1`` (class I3 helix) and ``gamma2`` (circle with kappa = sqrt(rho/2), tau = 0)."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    g1 = helix_spec(gamma1_curvatures(rho), "I3", rho, n)
    g2 = circle_spec(math.sqrt(rho / 2), 0.0, rho, n)
    return g1, g2


def gamma1_expected_torsions(rho: float = 6.0) -> tuple[float, float]:
    """``(tau12, tau23)`` of gamma1 as given in closed form: ``11 sqrt(14)/42`` and ``sqrt(70)/42``."""
    return 11 * math.sqrt(14) / 42, math.sqrt(70) / 42


# -- the flat surface with 0 < |T| < |H| -------------------------------------------------------


def case_iii_generators(data: CaseIIData) -> tuple[np.ndarray, np.ndarray]:
    """``M1, M2`` with ``d_i F = F M_i`` for ``F = [z, E1, E2, E6]`` (columns in C^4).

    In the unitary frame ``E3 = iE1``, ``E4 = iE2`` and ``E5 = iE6``, so the second
    fundamental form and the shape operator of E6 are complex combinations of
    ``E1, E2, E6``.
    """
    rho = data.rho
    T, N = math.sqrt(data.T2), math.sqrt(data.N2)
    A3, A4, A5, A6 = data.A3, data.A4, data.A5, data.A6
    a_h = data.a_h

    def sigma(i, j):  # coefficients on (E1, E2, E6)
        return np.array([1j * A3[i, j], 1j * A4[i, j], 1j * A5[i, j] + A6[i, j]])

    Ms = []
    for i in range(2):
        M = np.zeros((4, 4), dtype=complex)
        M[1 + i, 0] = 1.0  # d_i z = E_i
        for j in range(2):
            M[1:, 1 + j] = sigma(i, j)
            M[0, 1 + j] = -(rho / 4.0) * (1.0 if i == j else 0.0)
        # D_i E6 = (1/|N|)(-J A_H E_i - |T| sigma(E_i, E1)), from H = -|T|E3 - |N|E5 being parallel
        col = np.zeros(3, dtype=complex)
        col[:2] = -1j * a_h[:, i]
        col -= T * sigma(i, 0)
        M[1:, 3] = col / N
        Ms.append(M)
    return Ms[0], Ms[1]


def _rk4_line(F: np.ndarray, M: np.ndarray, length: float, step: float, nsave: int) -> list[np.ndarray]:
    """Integrate ``F' = F M`` and return ``F`` at ``nsave`` equally spaced stations (including 0)."""
    out = [F.copy()]
    if nsave <= 1:
        return out
    seg = length / (nsave - 1)
    n = max(1, int(math.ceil(seg / step)))
    h = seg / n
    # the right-hand side is linear, so one RK4 step is multiplication by a fixed matrix
    hm = h * M
    P = np.eye(len(M)) + hm + hm @ hm / 2 + hm @ hm @ hm / 6 + hm @ hm @ hm @ hm / 24
    Pn = np.linalg.matrix_power(P, n)
    for _ in range(nsave - 1):
        F = F @ Pn
        out.append(F.copy())
    return out


@dataclass(frozen=True)
class CaseIIIConstruction:
    data: CaseIIData
    M1: np.ndarray
    M2: np.ndarray
    F0: np.ndarray
    extent: tuple[float, float]
    step: float
    us: np.ndarray
    vs: np.ndarray
    samples: np.ndarray  # (len(us), len(vs), 4): z by RK4, u then v
    commutator: float  # ||[M1, M2]||
    commutativity: float  # max |F_uv - F_vu| over the grid
    exact_discrepancy: float  # max |z_rk4 - z_exact|
    chart: Chart

    def frame_at(self, u: float, v: float) -> np.ndarray:
        from scipy.linalg import expm

        return self.F0 @ expm(u * self.M1 + v * self.M2)

    def sampled_grid(self) -> list[dict]:
        """Rows ``{u, v, z}`` of the RK4 samples (z as (re, im) pairs)."""
        rows = []
        for i, u in enumerate(self.us):
            for j, v in enumerate(self.vs):
                z = self.samples[i, j]
                rows.append({"u": float(u), "v": float(v), "z": [[float(c.real), float(c.imag)] for c in z]})
        return rows


def _period_estimate(M: np.ndarray) -> float:
    lam = np.abs(np.linalg.eigvals(M).imag)
    lam = lam[lam > 1e-9]
    return TWO_PI / lam.min() if lam.size else math.inf


def case_iii_construction(
    rho: float = 3.0,
    step: float = 1e-3,
    extent: float | None = None,
    samples: int = 5,
    tol: float = 1e-4,
    a5: str = "consistent",
) -> CaseIIIConstruction:
    """Integrate the moving frame of the flat surface and build its chart.

    The frame equations have constant coefficients, so the chart is the exact
    ``z(u, v) = F0 exp(u M1 + v M2) e0``; the RK4 samples (u first, then v, and
    the other way round) measure integrability and cross-check the chart.

    ``a5="printed"`` uses the alternative sign pattern of A5 (see
    :meth:`CaseIIData.printed_A5`); its frame equations are not integrable and
    :class:`IntegrabilityError` is raised.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    data = solve_case_ii(rho)
    if a5 == "printed":
        data = dataclasses.replace(data, A5=data.printed_A5())
    elif a5 != "consistent":
        raise DomainError("a5 must be 'consistent' or 'printed'")
    M1, M2 = case_iii_generators(data)
    if extent is None:
        ext = (float(min(5.0, _period_estimate(M1))), float(min(5.0, _period_estimate(M2))))
    else:
        if extent <= 0:
            raise DomainError("extent must be positive")
        ext = (float(extent), float(extent))
    F0 = np.diag([2 / math.sqrt(rho), 1.0, 1.0, 1.0]).astype(complex)
    # samples at cell centres of [0, ext]^2, plus the origin for the line integrations
    us = (np.arange(samples) + 0.5) * ext[0] / samples
    vs = (np.arange(samples) + 0.5) * ext[1] / samples
    ugrid = np.concatenate([[0.0], us])
    vgrid = np.concatenate([[0.0], vs])

    def line(F, M, stations):
        out = [F]
        for a, b in zip(stations[:-1], stations[1:]):
            out.append(_rk4_line(out[-1], M, b - a, step, 2)[-1])
        return out

    uv = np.empty((samples, samples, 4, 4), dtype=complex)
    vu = np.empty_like(uv)
    along_u = line(F0, M1, ugrid)[1:]
    for i, Fu in enumerate(along_u):
        uv[i] = np.array(line(Fu, M2, vgrid)[1:])
    along_v = line(F0, M2, vgrid)[1:]
    for j, Fv in enumerate(along_v):
        col = line(Fv, M1, ugrid)[1:]
        for i in range(samples):
            vu[i, j] = col[i]
    commutativity = float(np.abs(uv - vu).max())
    if commutativity > tol:
        raise IntegrabilityError(f"frame equations not integrable: u/v order changes F by {commutativity:.3g}")

    def lift(u, v):
        e0 = np.array([1.0, 0.0, 0.0, 0.0])
        return C.matvec(F0, C.expm_action([M1, M2], [u, v], e0))

    exact = np.array([[lift(u, v) for v in vs] for u in us])
    z_rk4 = uv[..., :, 0]
    chart = Chart(lift, rho, ((0.0, ext[0]), (0.0, ext[1])), "case-iii")
    return CaseIIIConstruction(
        data=data,
        M1=M1,
        M2=M2,
        F0=F0,
        extent=ext,
        step=step,
        us=us,
        vs=vs,
        samples=z_rk4,
        commutator=float(np.abs(M1 @ M2 - M2 @ M1).max()),
        commutativity=commutativity,
        exact_discrepancy=float(np.abs(z_rk4 - exact).max()),
        chart=chart,
    )


def case_iii_surface(rho: float = 3.0, step: float = 1e-3, extent: float | None = None) -> Chart:
    return case_iii_construction(rho, step, extent).chart


def adapted_shape_operators(fd: FundamentalData) -> tuple[np.ndarray, np.ndarray]:
    """Shape operators ``A3..A6`` measured in the frame ``E1 = T/|T|``, ``E3 = JE1``, ``E4 = JE2``,
    ``E6 = N/|N|``, ``E5 = JE6`` at a totally real point with ``0 < |T| < |H|``.

    Returns ``(A, E)`` with ``A`` of shape (4, 2, 2) and ``E`` the tangent frame lifts.
    """
    T = fd.T
    tn = np.linalg.norm(T)
    N = 1j * fd.H - T
    nn = np.linalg.norm(N)
    if tn < 1e-10 or nn < 1e-10:
        raise DomainError("the adapted frame needs T != 0 and N != 0")
    c1 = np.real(fd.E.conj() @ T) / tn  # T/|T| in the chart frame
    R = np.array([c1, [-c1[1], c1[0]]])
    E = R @ fd.E
    sig = np.einsum("ia,jb,abx->ijx", R, R, fd.sigma_vec)
    normals = np.array([1j * E[0], 1j * E[1], 1j * N / nn, N / nn])
    A = np.real(np.einsum("ijx,ax->aij", sig, normals.conj()))
    return A, E
