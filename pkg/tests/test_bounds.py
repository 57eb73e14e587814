import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from warplab.bounds import (
    DBAR_BRACKET,
    band_bound,
    band_model_separation,
    bonnet_myers_bound,
    dbar,
    dbar_fixed_point_residual,
    green_conjugacy_bound,
    minimize_dbar,
    mu_bubble_delta,
    scaled_gbm_diam_bound,
    scaled_inj,
    table1,
)
from warplab.curvature import DomainError

# root of dDbar/dr found with 30-digit arithmetic
R_STAR = 2.67391228731926652498608055189
D_STAR = 8.71674295100462507890653140624


def test_green():
    assert green_conjugacy_bound(3, 6) == pytest.approx(math.pi)
    assert green_conjugacy_bound(7, 42) == pytest.approx(math.pi)
    assert green_conjugacy_bound(3, 24) == pytest.approx(math.pi / 2)
    with pytest.raises(DomainError):
        green_conjugacy_bound(3, 0)


def test_band_and_diameter_bounds():
    assert band_bound(2) == pytest.approx(math.pi)
    assert band_bound(3) == pytest.approx(2 * math.pi / 3)
    for n in range(2, 17):
        assert band_model_separation(n) == band_bound(n)
    for n in range(3, 17):
        assert bonnet_myers_bound(n) == band_bound(n)
    with pytest.raises(DomainError):
        bonnet_myers_bound(2)


def test_mu_bubble_delta():
    assert mu_bubble_delta(band_bound(3)) == 0.0
    assert mu_bubble_delta(4 * math.pi / 3) == pytest.approx(4.5, abs=1e-14)
    assert mu_bubble_delta(1e8) == pytest.approx(6.0)
    with pytest.raises(DomainError):
        mu_bubble_delta(0.0)


def test_scaled_gbm_bound():
    assert scaled_gbm_diam_bound(6) == pytest.approx(2 * math.pi / 3)
    assert scaled_gbm_diam_bound(1.5) == pytest.approx(4 * math.pi / 3)
    assert scaled_gbm_diam_bound(24) == pytest.approx(math.pi / 3)
    with pytest.raises(DomainError):
        scaled_gbm_diam_bound(-1)


def test_dbar_values():
    assert abs(dbar(5 * math.pi / 6) - 25 * math.pi / 9) < 1e-12
    r = 0.99 * math.pi
    assert dbar(r) == pytest.approx(2 * r + 2 * math.pi / (3 * math.sqrt(1 - 4 / (9 * 0.9801))), rel=1e-14)
    assert dbar(2 * math.pi / 3 + 1e-6) > 1000
    for bad in (2 * math.pi / 3, math.pi, 1.0):
        with pytest.raises(DomainError):
            dbar(bad)


def test_fixed_point_residual():
    rs = np.linspace(2 * math.pi / 3 + 1e-3, math.pi - 1e-3, 1000)
    assert max(abs(dbar_fixed_point_residual(r)) for r in rs) < 1e-10
    for r in (5 * math.pi / 6, 0.75 * math.pi, 0.9 * math.pi):
        assert abs(dbar_fixed_point_residual(r)) < 1e-10


def test_minimize_dbar():
    res = minimize_dbar(1e-10)
    # a flat minimum pins r only to about sqrt(machine eps) through function values
    assert res.r_star == pytest.approx(R_STAR, abs=1e-7)
    assert res.d_star == pytest.approx(D_STAR, abs=1e-12)
    assert 2.774 * math.pi <= res.d_star <= 2.776 * math.pi
    assert 0.850 * math.pi <= res.r_star <= 0.852 * math.pi
    assert res.d_star <= dbar(5 * math.pi / 6)
    for dr in (1e-6, -1e-6):
        assert dbar(res.r_star + dr) >= res.d_star - 1e-12


def test_minimize_dbar_bracket_independent():
    a = minimize_dbar(1e-6)
    b = minimize_dbar(1e-6, DBAR_BRACKET[::-1])
    c = minimize_dbar(1e-6, (2.3, 2.7, 3.0))
    assert abs(a.d_star - b.d_star) < 1e-9 and abs(a.d_star - c.d_star) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.floats(2 * math.pi / 3 + 1e-6, math.pi - 1e-9))
def test_dbar_minimality(r):
    assert minimize_dbar(1e-8).d_star <= dbar(r) + 1e-12


def test_scaled_inj():
    assert scaled_inj(6, 3, math.pi) == pytest.approx(math.pi)
    for n in range(3, 10):
        assert scaled_inj(2, n, math.pi) == pytest.approx(math.sqrt(2 / (n * (n - 1))) * math.pi)
        assert scaled_inj(n, n, math.pi) == pytest.approx(math.pi / math.sqrt(n - 1))
    with pytest.raises(DomainError):
        scaled_inj(-1, 3, 1.0)


def test_table_examples():
    rows = {r.manifold_name: r for r in table1(3)}
    row = rows["S^(n-1) x T^1"]
    assert (row.scal, row.inj) == (2.0, pytest.approx(math.pi))
    assert row.scaled_inj == pytest.approx(math.sqrt(1 / 3) * math.pi, abs=1e-15)
    assert "S^(n-2) x S^2" not in rows
    row = {r.manifold_name: r for r in table1(16)}["OP^2"]
    assert (row.scal, row.inj) == (576.0, pytest.approx(math.pi / 2))
    assert row.scaled_inj == pytest.approx(math.sqrt(12 / 5) * math.pi / 2, abs=1e-15)
    row = {r.manifold_name: r for r in table1(4)}["S^(n-2) x S^2"]
    assert (row.scal, row.scal_recomputed, row.consistent) == (6.0, 4.0, False)


@pytest.mark.parametrize("n", range(3, 17))
def test_table_scaled_column_self_consistent(n):
    for row in table1(n):
        assert abs(row.scaled_inj - scaled_inj(row.scal, n, row.inj)) < 1e-12
        assert row.scaled_consistent
        if row.manifold_name != "S^(n-2) x S^2":
            assert row.scal_consistent


def test_table_row_admissibility():
    names = lambda n: {r.manifold_name for r in table1(n)}  # noqa: E731
    assert "HP^(n/4)" in names(8) and "HP^(n/4)" not in names(6)
    assert "OP^2" in names(16) and "OP^2" not in names(8)
    assert "CP^(n/2)" not in names(5)
    assert len(table1(16)) == 9
