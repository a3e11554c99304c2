"""Verification suites behind the command line; each fills a :class:`ResidualReport`."""
from __future__ import annotations

import math

import numpy as np

from . import calculus as C
from . import catalog
from .biharmonic import (
    bitension_terms,
    case_i_consistency,
    case_i_mean_curvature,
    pmc_biharmonic_from_data,
    solve_case_ii,
)
from .curves import frenet_analysis, helix_class_torsions, helix_lift, integrate_frenet
from .report import ResidualReport
from .simons import SField, cauchy_riemann_defect, k_formula_residual, s_operator
from .surfaces import Chart, SurfacePoint, gauge_invariance_check

SUITES = ("verify-torus", "verify-case3", "verify-curves", "verify-simons", "verify-algebra", "controls")
CONTROL_CASES = ("perturbed-torus", "clifford", "generic", "printed-a5")


def random_phase(rng: np.random.Generator):
    """A smooth jet-aware phase ``phi(u, v)`` with random coefficients."""
    a, b, c, d, e = rng.uniform(-1.5, 1.5, size=5)

    def phase(u, v):
        return a * C.sin(b * u + c * v) + d * u * v + e

    return phase


def gauge_sup(chart: Chart, points, rng: np.random.Generator) -> float:
    return max(gauge_invariance_check(chart, random_phase(rng), u, v) for u, v in points)


def _surface_sweep(chart: Chart, points) -> dict:
    """Sup-norms of the pointwise surface checks over ``points``."""
    out = {k: 0.0 for k in ("pmc", "bt_normal", "bt_tangent", "K", "K_gauss", "cos", "lagr", "ah", "trace",
                            "jt", "bound_ratio", "sq", "kform")}
    out["h_min"] = math.inf
    out["h2"] = []
    rho = chart.rho
    for u, v in points:
        sp = SurfacePoint(chart, u, v, order=4)
        fd = sp.fundamental
        bt = bitension_terms(sp)
        pb = pmc_biharmonic_from_data(fd, rho)
        st = s_operator(fd, rho)
        out["pmc"] = max(out["pmc"], pb.pmc)
        out["bt_normal"] = max(out["bt_normal"], bt.normal_residual)
        out["bt_tangent"] = max(out["bt_tangent"], bt.tangent_residual)
        out["K"] = max(out["K"], abs(fd.K_intrinsic))
        out["K_gauss"] = max(out["K_gauss"], abs(fd.K_intrinsic - fd.K_gauss))
        out["cos"] = max(out["cos"], abs(fd.cos_theta))
        out["lagr"] = max(out["lagr"], abs(math.sqrt(fd.t2) - fd.h_norm))
        out["ah"] = max(out["ah"], pb.ah_identity)
        out["trace"] = max(out["trace"], pb.trace_residual)
        out["jt"] = max(out["jt"], pb.jt_tangent)
        out["sq"] = max(out["sq"], st.sq_consistency)
        out["h_min"] = min(out["h_min"], fd.h_norm)
        out["h2"].append(fd.h2)
        if fd.h_norm > 1e-8:
            out["bound_ratio"] = max(out["bound_ratio"], st.normS / st.bound)
            out["kform"] = max(out["kform"], k_formula_residual(fd, st, rho))
    return out


def suite_torus(report: ResidualReport, branch: str, grid: int, rng) -> None:
    chart = catalog.torus_cp2(branch)
    r = catalog.torus_radii(branch)
    report.check(f"{branch}.radii_sum", abs(sum(r) - 1.0), "radii", "PAPER")
    sw = _surface_sweep(chart, chart.grid(grid))
    p = f"{branch}."
    report.check(p + "pmc_sup", sw["pmc"], "pointwise", "PAPER")
    report.check(p + "bitension_normal_sup", sw["bt_normal"], "integrated", "PAPER")
    report.check(p + "bitension_tangent_sup", sw["bt_tangent"], "integrated", "PAPER")
    report.check(p + "gauss_curvature_sup", sw["K"], "pointwise", "PAPER")
    report.check(p + "gauss_equation_sup", sw["K_gauss"], "pointwise", "DERIVED")
    report.check(p + "cos_theta_sup", sw["cos"], "totally_real", "PAPER")
    report.check(p + "lagrangian_T_minus_H_sup", sw["lagr"], "pointwise", "PAPER")
    report.check(p + "ah_identity_sup", sw["ah"], "pointwise", "PAPER")
    report.check(p + "pmc_biharmonic_trace_sup", sw["trace"], "pointwise", "PAPER")
    report.check(p + "JT_tangent_part_sup", sw["jt"], "pointwise", "PAPER")
    report.check(p + "proper_min_H", sw["h_min"], "proper", "PAPER", kind="lower")
    h2_pred = catalog.torus_mean_curvature2(branch)
    report.check(p + "H2_vs_closed_form", max(abs(h - h2_pred) for h in sw["h2"]), "pointwise", "DERIVED")
    report.check(p + "S_over_bound_max", sw["bound_ratio"], "bound_ratio", "PAPER")
    report.check(p + "gauge_invariance_sup", gauge_sup(chart, chart.grid(3), rng), "gauge", "DERIVED")


def suite_case3(report: ResidualReport, rho: float, step: float, rng) -> None:
    con = catalog.case_iii_construction(rho, step=step)
    data = con.data
    ch = con.chart
    report.check("commutator_norm", con.commutator, "exact", "DERIVED")
    report.check("commutativity_residual", con.commutativity, "commutativity", "DERIVED")
    report.check("rk4_vs_exact_chart", con.exact_discrepancy, "integrated", "DERIVED")
    worst = {k: 0.0 for k in ("H2", "T2", "N2", "K", "bt_n", "bt_t", "A", "sig11", "pmc")}
    for u, v in ch.grid(5):
        sp = SurfacePoint(ch, u, v, order=4)
        fd = sp.fundamental
        bt = bitension_terms(sp)
        A, _ = catalog.adapted_shape_operators(fd)
        worst["H2"] = max(worst["H2"], abs(fd.h2 - rho / 3))
        worst["T2"] = max(worst["T2"], abs(fd.t2 - 4 * rho / 27))
        worst["N2"] = max(worst["N2"], abs(fd.h2 - fd.t2 - 5 * rho / 27))
        worst["K"] = max(worst["K"], abs(fd.K_intrinsic))
        worst["bt_n"] = max(worst["bt_n"], bt.normal_residual)
        worst["bt_t"] = max(worst["bt_t"], bt.tangent_residual)
        worst["A"] = max(worst["A"], float(np.linalg.norm(A - np.array(data.shape_operators))))
        worst["sig11"] = max(worst["sig11"], abs(float(np.linalg.norm(A[:, 0, 0])) - math.sqrt(7 * rho / 6)))
        worst["pmc"] = max(worst["pmc"], float(np.abs(fd.nablaperpH).max()))
    report.check("H2_minus_rho_over_3", worst["H2"], "case3_invariants", "PAPER")
    report.check("T2_minus_4rho_over_27", worst["T2"], "case3_invariants", "PAPER")
    report.check("N2_minus_5rho_over_27", worst["N2"], "case3_invariants", "PAPER")
    report.check("gauss_curvature_sup", worst["K"], "case3_pointwise", "PAPER")
    report.check("pmc_sup", worst["pmc"], "pointwise", "PAPER")
    report.check("bitension_normal_sup", worst["bt_n"], "integrated", "PAPER")
    report.check("bitension_tangent_sup", worst["bt_t"], "integrated", "PAPER")
    report.check("shape_operators_vs_data", worst["A"], "case3_pointwise", "DERIVED")
    report.check("sigma11_norm_minus_kappa1", worst["sig11"], "integrated", "PAPER")
    u0, v0 = ch.grid(1)[0]
    fa = frenet_analysis(lambda s: ch(s, v0), u0, rho, 4)
    k_exp = np.array(catalog.gamma1_curvatures(rho))
    t12, t23 = catalog.gamma1_expected_torsions(rho)
    report.check("u_curve_curvatures", float(np.abs(fa.curvatures - k_exp).max()), "integrated", "PAPER")
    report.check("u_curve_tau12", abs(fa.torsions[0, 1] - t12), "torsion", "PAPER")
    report.check("u_curve_tau23", abs(fa.torsions[1, 2] - t23), "torsion", "PAPER")
    fb = frenet_analysis(lambda s: ch(u0, s), v0, rho, 2)
    report.check("v_curve_kappa_minus_sqrt_rho_over_2", abs(fb.curvatures[0] - math.sqrt(rho / 2)), "case3_pointwise",
                 "PAPER")
    report.check("v_curve_tau12", abs(fb.torsions[0, 1]), "pointwise", "PAPER")
    report.check("gauge_invariance_sup", gauge_sup(ch, ch.grid(2), rng), "gauge", "DERIVED")


def suite_curves(report: ResidualReport, rho: float, step: float, length: float = 10.0) -> None:
    (s1, f1), (s2, f2) = catalog.gamma_specs(rho)
    k_exp = np.array(s1.curvatures)
    t12, t23 = catalog.gamma1_expected_torsions(rho)
    tau_exp = helix_class_torsions(*s1.curvatures, "I3")
    report.check("gamma1.nu_formula_tau12", abs(tau_exp[0, 1] - t12), "nu_formula", "PAPER")
    report.check("gamma1.nu_formula_tau23", abs(tau_exp[1, 2] - t23), "nu_formula", "PAPER")
    c1 = integrate_frenet(s1, f1, length, step)
    report.check("gamma1.orthonormality_drift", c1.orthonormality_drift(), "pointwise", "DERIVED")
    report.check("gamma1.horizontality_defect", c1.horizontality_defect(), "pointwise", "DERIVED")
    kap = c1.recovered_curvatures()[2:-2]
    report.check("gamma1.kappa_recovered", float(np.abs(kap - k_exp).max()), "integrated", "PAPER")
    tau = c1.torsions()
    report.check("gamma1.torsion_constancy", float(np.ptp(tau, axis=0).max()), "integrated", "PAPER")
    pattern = np.zeros((4, 4))
    for (i, j), val in {(0, 1): t12, (2, 3): -t12, (1, 2): t23, (0, 3): -t23}.items():
        pattern[i, j], pattern[j, i] = val, -val
    report.check("gamma1.torsions_vs_closed_form", float(np.abs(tau - pattern).max()), "torsion", "PAPER")
    exact = helix_lift(s1, f1)
    idx = len(c1.s) - 1
    report.check("gamma1.rk4_vs_exact_lift", float(np.linalg.norm(c1.z[idx] - exact(c1.s[idx]))), "integrated",
                 "DERIVED")
    fa = frenet_analysis(exact, 1.0, rho, 4)
    report.check("gamma1.jet_frenet_closure", fa.closure, "pointwise", "DERIVED")
    c2 = integrate_frenet(s2, f2, length, step)
    kap2 = c2.recovered_curvatures()[2:-2, 0]
    report.check("gamma2.orthonormality_drift", c2.orthonormality_drift(), "pointwise", "DERIVED")
    report.check("gamma2.kappa_recovered", float(np.abs(kap2 - math.sqrt(rho / 2)).max()), "integrated", "PAPER")
    report.check("gamma2.tau12", float(np.abs(c2.torsions()[:, 0, 1]).max()), "pointwise", "PAPER")


def _simons_on(report: ResidualReport, prefix: str, chart: Chart, points, flat: bool) -> None:
    sup = {k: 0.0 for k in ("grad", "res", "cod", "cr", "sq", "ratio")}
    for u, v in points:
        sp = SurfacePoint(chart, u, v, order=4)
        sf = SField(sp)
        lap = sf.laplacian_norm2()
        grad2 = sf.grad_norm2()
        s2 = float(sf.norm2.value)
        sup["grad"] = max(sup["grad"], math.sqrt(max(grad2, 0.0)))
        sup["res"] = max(sup["res"], abs(0.5 * lap - 2 * sp.K_intrinsic * s2 - grad2))
        sup["cod"] = max(sup["cod"], sf.codazzi_defect())
        st = s_operator(sp.fundamental, chart.rho)
        sup["sq"] = max(sup["sq"], st.sq_consistency)
        sup["ratio"] = max(sup["ratio"], st.normS / st.bound)
        if flat:
            sup["cr"] = max(sup["cr"], cauchy_riemann_defect(chart, u, v))
    report.check(prefix + "SQ_consistency", sup["sq"], "sq", "PAPER")
    report.check(prefix + "grad_S_sup", sup["grad"], "pointwise", "PAPER")
    report.check(prefix + "simons_identity_sup", sup["res"], "integrated", "PAPER")
    report.check(prefix + "codazzi_defect_sup", sup["cod"], "integrated", "PAPER")
    report.check(prefix + "S_over_bound_max", sup["ratio"], "bound_ratio", "PAPER")
    if flat:
        report.check(prefix + "cauchy_riemann_defect_sup", sup["cr"], "integrated", "PAPER")


def suite_simons(report: ResidualReport, grid: int) -> None:
    for branch in catalog.BRANCHES:
        ch = catalog.torus_cp2(branch)
        _simons_on(report, f"torus-{branch}.", ch, ch.grid(grid), flat=True)
    ch = catalog.case_iii_surface(3.0)
    _simons_on(report, "case-iii.", ch, ch.grid(min(grid, 5)), flat=True)
    data = solve_case_ii(3.0)
    st = s_operator(data, 3.0)
    report.check("case-ii-data.S_matrix", float(np.abs(st.S - np.diag([6.0, -6.0])).max()), "exact", "DERIVED")


def suite_algebra(report: ResidualReport, rho: float) -> None:
    data = solve_case_ii(rho)
    report.check("H2_over_rho_minus_1_3", abs(data.H2 / rho - 1 / 3), "exact", "PAPER")
    report.check("T2_over_rho_minus_4_27", abs(data.T2 / rho - 4 / 27), "exact", "PAPER")
    report.check("N2_over_rho_minus_5_27", abs(data.N2 / rho - 5 / 27), "exact", "PAPER")
    for name, val in data.residuals.items():
        report.check(f"residual.{name}", abs(val), "exact", "PAPER")
    report.check("gauss_curvature", abs(data.gauss_curvature()), "exact", "PAPER")
    T, N = math.sqrt(data.T2), math.sqrt(data.N2)
    a3 = np.array([[data.a - T, 0], [0, -data.a - T]])
    a4 = np.array([[0, -data.a - T], [-data.a - T, 0]])
    report.check("A3_vs_closed_form", float(np.abs(data.A3 - a3).max()), "exact", "PAPER")
    report.check("A4_vs_closed_form", float(np.abs(data.A4 - a4).max()), "exact", "PAPER")
    report.check("A5_trace_minus_2N", abs(np.trace(data.A5) + 2 * N), "exact", "DERIVED")
    report.check("A5_printed_discrepancy", float(np.abs(data.printed_A5() - data.A5).max()), "exact", "DERIVED",
                 control=True, note="the alternative sign pattern of A5 differs from the trace-consistent one")
    report.check("case_i.H_minus_sqrt_rho_over_2", abs(case_i_mean_curvature(rho) - math.sqrt(rho) / 2), "exact",
                 "PAPER")
    report.check("case_i.pseudo_umbilical_consistency", case_i_consistency(rho), "exact", "TRIVIAL")
    report.extra["case_ii"] = data.to_json()


def suite_controls(report: ResidualReport, case: str | None, grid: int) -> None:
    cases = CONTROL_CASES if case is None else (case,)
    for c in cases:
        if c == "perturbed-torus":
            ch = catalog.perturbed_torus(0.5, 0.25, 0.25)
            sw = _surface_sweep(ch, ch.grid(grid))
            report.check("perturbed.pmc_sup", sw["pmc"], "pointwise", "DERIVED")
            report.check("perturbed.bitension_normal_sup", sw["bt_normal"], "integrated", "DERIVED", control=True)
            report.check("perturbed.bitension_normal_exceeds", sw["bt_normal"], "controls", "DERIVED", kind="lower")
        elif c == "clifford":
            ch = catalog.clifford_torus()
            sw = _surface_sweep(ch, ch.grid(grid))
            report.check("clifford.H_sup", max(math.sqrt(h) for h in sw["h2"]), "pointwise", "DERIVED")
            report.check("clifford.proper_min_H", sw["h_min"], "proper", "DERIVED", kind="lower", control=True)
        elif c == "generic":
            ch = catalog.generic_chart(4.0)
            sw = _surface_sweep(ch, ch.grid(min(grid, 4)))
            report.check("generic.pmc_sup", sw["pmc"], "pointwise", "DERIVED", control=True)
            report.check("generic.bitension_normal_sup", sw["bt_normal"], "integrated", "DERIVED", control=True)
        elif c == "printed-a5":
            import dataclasses

            data = solve_case_ii(3.0)
            alt = dataclasses.replace(data, A5=data.printed_A5())
            M1, M2 = catalog.case_iii_generators(alt)
            report.check("printed_a5.gauss_curvature", abs(alt.gauss_curvature()), "exact", "DERIVED", control=True)
            report.check("printed_a5.commutator_norm", float(np.abs(M1 @ M2 - M2 @ M1).max()), "exact", "DERIVED",
                         control=True)
        else:
            raise ValueError(f"unknown control case {c!r}")
