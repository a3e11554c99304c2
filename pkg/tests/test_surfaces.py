import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpn_biharmonic import calculus as C
from cpn_biharmonic.catalog import case_iii_surface, cp1_chart, generic_chart, rp2_chart, torus_cp2
from cpn_biharmonic.errors import DegenerateError
from cpn_biharmonic.surfaces import (
    Chart,
    SurfacePoint,
    fundamental_data,
    fundamental_discrepancy,
    gauge_invariance_check,
    grid_report,
    pmc_residual,
    write_grid_report,
)


@pytest.mark.parametrize("rho", [1.0, 4.0, 10.0])
def test_cp1_is_totally_geodesic_complex_line(rho):
    fd = fundamental_data(cp1_chart(rho), 0.1, -0.2)
    assert abs(fd.K_intrinsic - rho) < 1e-9 * rho
    assert abs(abs(fd.cos_theta) - 1) < 1e-12
    assert np.abs(fd.sigma_vec).max() < 1e-12
    assert fd.h_norm < 1e-12


@pytest.mark.parametrize("rho", [1.0, 4.0, 10.0])
def test_rp2_is_totally_geodesic_totally_real(rho):
    fd = fundamental_data(rp2_chart(rho), 0.2, 0.3)
    assert abs(fd.K_intrinsic - rho / 4) < 1e-9 * rho
    assert abs(fd.cos_theta) < 1e-12
    assert np.abs(fd.sigma_vec).max() < 1e-12


def test_torus_point_values():
    fd = fundamental_data(torus_cp2("plus"), 0.0, 0.0)
    assert abs(fd.K_intrinsic) < 1e-10
    assert abs(fd.cos_theta) < 1e-12
    assert abs(math.sqrt(fd.t2) - fd.h_norm) < 1e-10
    assert np.abs(fd.nablaperpH).max() < 1e-10


def test_intrinsic_and_gauss_curvature_agree_on_generic_chart(rng):
    ch = generic_chart(4.0)
    for u, v in rng.uniform(-0.5, 0.5, size=(10, 2)):
        fd = fundamental_data(ch, u, v)
        assert abs(fd.K_intrinsic - fd.K_gauss) < 1e-8


def test_generic_chart_is_not_pmc():
    assert pmc_residual(generic_chart(), 3) > 1e-3


def test_degenerate_immersion_raises():
    ch = Chart(lambda u, v: C.stack([1.0 + 0 * u, u + 0j, u + 0j]), 4.0)
    with pytest.raises(DegenerateError):
        fundamental_data(ch, 0.1, 0.1)


def test_frame_is_orthonormal_horizontal_and_tangent_to_the_lift():
    ch = generic_chart(4.0)
    fd = fundamental_data(ch, 0.3, -0.1)
    E = fd.E
    gram = np.real(E.conj() @ E.T)
    assert np.abs(gram - np.eye(2)).max() < 1e-12
    assert np.abs(E.conj() @ fd.z).max() < 1e-12
    assert np.abs(fd.normals.conj() @ fd.z).max() < 1e-12


def test_swap_reparametrization_keeps_invariants():
    ch = generic_chart()
    a = fundamental_data(ch, 0.2, -0.3)
    b = fundamental_data(ch.swapped(), -0.3, 0.2)
    assert abs(a.K_intrinsic - b.K_intrinsic) < 1e-10
    assert abs(a.h2 - b.h2) < 1e-10
    assert abs(abs(a.cos_theta) - abs(b.cos_theta)) < 1e-10
    # the orientation flips, so cos(theta) changes sign
    assert abs(a.cos_theta + b.cos_theta) < 1e-10
    np.testing.assert_allclose(a.H, b.H, atol=1e-10)


@pytest.mark.parametrize(
    "chart",
    [torus_cp2("plus"), torus_cp2("minus"), generic_chart(), cp1_chart(), rp2_chart(), case_iii_surface()],
    ids=lambda c: c.name,
)
@given(a=st.floats(-2, 2), b=st.floats(-2, 2), c=st.floats(-2, 2), t=st.floats(0.1, 0.9), s=st.floats(0.1, 0.9))
def test_gauge_invariance(chart, a, b, c, t, s):
    phase = lambda u, v: a * C.sin(u + 2 * v) + b * u * v + c
    (u0, u1), (v0, v1) = chart.domain
    u, v = u0 + t * (u1 - u0), v0 + s * (v1 - v0)
    assert gauge_invariance_check(chart, phase, u, v) < 1e-9


def test_discrepancy_detects_different_surfaces():
    a = fundamental_data(generic_chart(), 0.1, 0.1)
    b = fundamental_data(generic_chart(), 0.2, 0.1)
    assert fundamental_discrepancy(a, b) > 1e-3


def test_grid_report_csv_round_trip(tmp_path):
    rows = grid_report(torus_cp2("plus"), 2)
    assert len(rows) == 4
    path = tmp_path / "grid.csv"
    write_grid_report(rows, path)
    with open(path) as fh:
        back = list(csv.DictReader(fh))
    assert [float(r["K"]) for r in back] == [r["K"] for r in rows]
    write_grid_report(rows, tmp_path / "grid.json", fmt="json")


def test_surface_point_lift_dimension():
    sp = SurfacePoint(generic_chart(), 0.0, 0.0, order=3)
    assert sp.fundamental.z.shape == (3,)
