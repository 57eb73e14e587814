import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warplab.radial import (
    band_profile,
    constant,
    family_a,
    family_b,
    odd_sine_series,
    sphere,
    trig_polynomial,
)

H = 1e-5


def fd_ok(f, df, r, rel=1e-6):
    approx = (f(r + H) - f(r - H)) / (2 * H)
    exact = df(r)
    return np.all(np.abs(approx - exact) <= rel * np.maximum(1.0, np.abs(exact)))


def check_derivatives(fn, lo, hi):
    r = np.linspace(lo, hi, 37)
    assert fd_ok(fn.f, fn.df, r)
    assert fd_ok(fn.df, fn.d2f, r)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.3, 0.95), st.floats(-0.9, 5.0))
def test_family_derivatives(alpha, beta):
    check_derivatives(family_a(alpha), 0.01, np.pi - 0.01)
    check_derivatives(family_b(beta), 0.01, np.pi - 0.01)


@pytest.mark.parametrize("n", range(2, 9))
def test_band_profile_derivatives(n):
    a = band_profile(n)
    check_derivatives(a, a.start + 0.05, a.length - 0.05)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=4), st.lists(st.floats(-1, 1), min_size=1, max_size=4))
def test_trig_polynomial_derivatives(cc, ss):
    check_derivatives(trig_polynomial(3.0, cc, ss), 0.01, np.pi - 0.01)


def test_sphere_profiles():
    a = sphere(4.0)
    assert a.length == pytest.approx(np.pi / 2)
    assert a.value(np.pi / 4) == pytest.approx(0.5)
    check_derivatives(a, 0.01, a.length - 0.01)


def test_odd_sine_series_is_sphere_profile():
    a = odd_sine_series([1.0, 0.1])
    assert a.value(0.0) == pytest.approx(0.0, abs=1e-15)
    assert a.value(np.pi) == pytest.approx(0.0, abs=1e-15)
    assert a.df(np.asarray(0.0)) == pytest.approx(1.0)
    check_derivatives(a, 0.01, np.pi - 0.01)


def test_family_a_matches_sphere_profile_conditions():
    for alpha in (-0.2, 0.0, 1 / 15, 0.5):
        a = family_a(alpha)
        assert abs(a.value(0.0)) < 1e-15 and abs(a.value(np.pi)) < 1e-15
        assert a.df(np.asarray(0.0)) == pytest.approx(1.0)
        assert np.all(a.value(np.linspace(0.01, np.pi - 0.01, 200)) > 0)


def test_constant_broadcasts():
    c = constant(2.0)
    f, df, d2f = c(np.zeros((3, 2)))
    assert f.shape == (3, 2) and np.all(f == 2) and np.all(df == 0) and np.all(d2f == 0)


def test_array_parameters_broadcast():
    a = family_a(np.array([[0.0], [0.1]]))
    assert a.value(np.linspace(0.1, 1.0, 5)[None, :]).shape == (2, 5)
