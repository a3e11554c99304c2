import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpn_biharmonic import calculus as C
from cpn_biharmonic.calculus import Jet, eval_jet, expm_action, fd_derivative, fd_oracle, jet3_eval
from cpn_biharmonic.catalog import case_iii_surface, cp1_chart, generic_chart, rp2_chart, torus_cp2
from cpn_biharmonic.errors import DegenerateError, DomainError


def cubic(u, v):
    return C.stack([u**3, 0 * u])


def test_polynomial_third_derivative():
    j = jet3_eval(cubic, 0.3, -0.2)
    np.testing.assert_allclose(j.third[0], [6, 0], atol=1e-14)
    np.testing.assert_allclose(j.second[0], [6 * 0.3, 0], atol=1e-14)


def test_exponential_derivatives():
    j = jet3_eval(lambda u, v: C.stack([C.exp(1j * u), 0 * u]), 0.0, 0.0)
    np.testing.assert_allclose(j.first[0], [1j, 0], atol=1e-15)
    np.testing.assert_allclose(j.second[0], [-1, 0], atol=1e-15)
    np.testing.assert_allclose(j.third[0], [-1j, 0], atol=1e-15)


def test_mixed_partials_of_product():
    f = lambda u, v: C.stack([C.sin(u) * C.cos(v) * u * v])
    j = eval_jet(f, 0.4, 0.7, 4)
    u, v = 0.4, 0.7
    # d_u d_v (u v sin u cos v) by hand
    expected = (math.sin(u) + u * math.cos(u)) * (math.cos(v) - v * math.sin(v))
    assert j.partial(1, 1)[0] == pytest.approx(expected, abs=1e-14)


def test_reciprocal_and_sqrt_match_closed_form():
    x = Jet.variable(2.0, 0, 4)
    r = (x * x + 1.0).reciprocal()
    # d/du 1/(u^2+1) = -2u/(u^2+1)^2
    assert r.partial(1, 0) == pytest.approx(-4 / 25, abs=1e-15)
    s = C.sqrt(x)
    assert s.partial(2, 0) == pytest.approx(-0.25 * 2.0**-1.5, abs=1e-15)


def test_normalizing_zero_vector_is_an_evaluation_error():
    f = lambda u, v: C.sqrt(u * u + v * v)
    with pytest.raises(DegenerateError):
        eval_jet(f, 0.0, 0.0, 3)


def test_fd_oracle_sine():
    d = fd_oracle(lambda u, v: np.array([math.sin(u)]), 0.0, 0.0, 1, h=1e-5)
    assert abs(d["u"][0] - 1) < 1e-9


def test_fd_oracle_converges_at_second_order():
    f = lambda u, v: np.array([np.exp(1j * u) * np.cos(2 * v) + u * v**2])
    exact = jet3_eval(lambda u, v: C.stack([C.exp(1j * u) * C.cos(2 * v) + u * v * v]), 0.3, 0.1)
    errs = []
    for h in (1e-2, 5e-3):
        d = fd_oracle(f, 0.3, 0.1, 2, h=h)
        errs.append(abs(d["uv"][0] - exact.second[1][0]) + abs(d["uu"][0] - exact.second[0][0]))
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_fd_oracle_warns_for_tiny_step():
    with pytest.warns(RuntimeWarning):
        fd_oracle(lambda u, v: np.array([u]), 0.0, 0.0, 1, h=1e-11)


def test_fd_oracle_rejects_bad_order():
    with pytest.raises(DomainError):
        fd_oracle(lambda u, v: np.array([u]), 0.0, 0.0, 4)


CATALOG = [torus_cp2("plus"), torus_cp2("minus"), cp1_chart(), rp2_chart(), generic_chart(), case_iii_surface()]


@pytest.mark.parametrize("chart", CATALOG, ids=lambda c: c.name)
def test_jets_agree_with_finite_differences_on_catalog_charts(chart, rng):
    (u0, u1), (v0, v1) = chart.domain
    for _ in range(20):
        u, v = rng.uniform(u0, u1), rng.uniform(v0, v1)
        j = jet3_eval(chart.map, u, v)
        f = lambda a, b: np.asarray(chart(a, b))
        h = 1e-4
        for order, keys, exact in ((1, ("u", "v"), j.first), (2, ("uu", "uv", "vv"), j.second)):
            d = fd_oracle(f, u, v, order, h)
            for k, e in zip(keys, exact):
                assert np.abs(d[k] - e).max() < 100 * h**2
        # third differences lose ~eps/h^3 to rounding at h = 1e-4; the 100 h^2 bound is met at h = 1e-2
        h3 = 1e-2
        d = fd_oracle(f, u, v, 3, h3)
        for k, e in zip(("uuu", "uuv", "uvv", "vvv"), j.third):
            assert np.abs(d[k] - e).max() < 100 * h3**2


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_regauged_jet_obeys_product_rule(u, v, a, b, c):
    f = lambda s, t: C.stack([1.0 + s * t, s - 2j * t, s * s + 0j])
    phi = lambda s, t: a * s + b * t + c * s * t
    g = lambda s, t: C.exp(1j * phi(s, t)) * f(s, t)
    jf = eval_jet(f, u, v, 3)
    jg = eval_jet(g, u, v, 3)
    e = np.exp(1j * phi(u, v))
    phi_u = a + c * v
    np.testing.assert_allclose(jg.partial(1, 0), e * (jf.partial(1, 0) + 1j * phi_u * jf.value), atol=1e-12)
    phi_v = b + c * u
    np.testing.assert_allclose(jg.partial(0, 1), e * (jf.partial(0, 1) + 1j * phi_v * jf.value), atol=1e-12)


def test_expm_action_matches_scipy_derivatives():
    from scipy.linalg import expm

    rng = np.random.default_rng(1)
    A = rng.normal(size=(3, 3))
    B = A @ A + 2 * A  # commutes with A
    x0 = np.array([1.0, 0.5, -0.3])
    j = expm_action([A, B], [Jet.variable(0.2, 0, 3), Jet.variable(-0.1, 1, 3)], x0)
    base = expm(0.2 * A - 0.1 * B)
    np.testing.assert_allclose(j.value, base @ x0, atol=1e-12)
    np.testing.assert_allclose(j.partial(1, 0), A @ base @ x0, atol=1e-11)
    np.testing.assert_allclose(j.partial(1, 1), A @ B @ base @ x0, atol=1e-10)


def test_fd_derivative_fourth_order():
    s = np.linspace(0, 1, 101)
    d = fd_derivative(np.sin(s), s[1] - s[0])
    assert np.isnan(d[:2]).all() and np.isnan(d[-2:]).all()
    assert np.abs(d[2:-2] - np.cos(s[2:-2])).max() < 1e-9
