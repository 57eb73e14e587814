import math

import numpy as np
import pytest

from warplab.curvature import WarpFamilyParams
from warplab.radial import family_a, sphere
from warplab.revolution.distance import connect, diameter, distance, pole_route_bound
from warplab.revolution.geodesic import shoot_geodesic


def great_circle(rp, pp, rq, pq):
    cos = math.cos(rp) * math.cos(rq) + math.sin(rp) * math.sin(rq) * math.cos(pp - pq)
    return math.acos(max(-1.0, min(1.0, cos)))


def test_round_sphere_examples():
    a = sphere()
    assert distance(a, (0.0, 0.0), (math.pi, 0.0)) == pytest.approx(math.pi)
    assert distance(a, (math.pi / 2, 0.0), (math.pi / 2, math.pi / 2)) == pytest.approx(math.pi / 2, abs=1e-9)


def test_round_sphere_random_pairs():
    a = sphere()
    rng = np.random.default_rng(11)
    for _ in range(10):
        rp, rq = rng.uniform(0, math.pi, 2)
        pp, pq = rng.uniform(0, 2 * math.pi, 2)
        assert distance(a, (rp, pp), (rq, pq)) == pytest.approx(great_circle(rp, pp, rq, pq), abs=1e-5)


def test_family_poles_are_pi_apart():
    a = WarpFamilyParams.from_s(4, 1.0).a
    assert distance(a, (0.0, 0.0), (math.pi, 0.0)) == pytest.approx(math.pi, abs=1e-12)


def test_distance_never_exceeds_pole_routes():
    a = family_a(1 / 15)
    rng = np.random.default_rng(5)
    for _ in range(5):
        rp, rq = rng.uniform(0.05, 3.1, 2)
        d = distance(a, (rp, 0.0), (rq, rng.uniform(0, math.pi)))
        assert d <= pole_route_bound(a, rp, rq) + 1e-12
        assert d >= abs(rp - rq) - 1e-12


def test_connecting_geodesic_lands_on_target():
    a = family_a(1 / 15)
    rng = np.random.default_rng(1)
    hits = 0
    for _ in range(6):
        rp, rq = rng.uniform(0.05, 3.1, 2)
        dphi = rng.uniform(0, math.pi)
        c = connect(a, (rp, 0.0), (rq, dphi))
        if c.kind != "geodesic":
            continue
        hits += 1
        end = shoot_geodesic(a, (rp, 0.0), c.direction_angle, c.length).end
        assert end.r == pytest.approx(rq, abs=1e-7)
        gap = (end.phi - dphi + math.pi) % (2 * math.pi) - math.pi
        assert abs(gap) * float(a.value(rq)) < 1e-7
    assert hits >= 3


def test_distance_is_symmetric():
    a = family_a(0.05)
    d1 = distance(a, (0.7, 0.0), (2.2, 1.3))
    d2 = distance(a, (2.2, 0.0), (0.7, 1.3))
    assert d1 == pytest.approx(d2, abs=1e-9)


def test_diameters():
    assert diameter(sphere()) == pytest.approx(math.pi, abs=1e-4)
    assert diameter(WarpFamilyParams.from_s(4, 1.0).a) == pytest.approx(math.pi, abs=1e-3)
    assert diameter(WarpFamilyParams.from_s(6, 0.5).a) >= math.pi - 1e-6
    with pytest.raises(ValueError):
        diameter(sphere(), 4)


def test_diameter_monotone_in_density():
    a = WarpFamilyParams.from_s(3, 0.3).a
    assert diameter(a, 8) <= diameter(a, 12) <= diameter(a, 16)
