"""Geodesic distance and diameter for rotationally symmetric spheres.

Points are ``(r, phi)`` in polar normal coordinates about the north pole.
Rotational symmetry reduces everything to ``r_p``, ``r_q`` and the folded
angle ``|phi_q - phi_p|`` in ``[0, pi]``.

Any two points are joined through either pole by a curve of length
``r_p + r_q`` or ``2L - r_p - r_q`` (``L`` the meridian length); the smaller
never exceeds ``L``, and the poles themselves are exactly ``L`` apart.  These
pole routes seed the search and give a rigorous pruning bound for diameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..radial import RadialFunction
from .clairaut import ClairautIntegrals

DEFAULT_DIRECTIONS = 720
MAX_WINDINGS = 8
# a turning radius within this of rq still counts as reaching it (fold points)
REACH_TOL = 1e-12
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Connection:
    length: float
    # launch angle from the outward meridian towards increasing phi; None for pole routes
    direction_angle: float | None
    kind: str


def _fold(dphi: float) -> float:
    d = math.fmod(abs(dphi), TWO_PI)
    return TWO_PI - d if d > math.pi else d


def pole_route_bound(a: RadialFunction, rp: float, rq: float) -> float:
    return min(rp + rq, 2 * a.length - rp - rq)


class _Sweep:
    """Crossings of the parallel ``r = rq`` by geodesics leaving ``(rp, 0)``."""

    def __init__(self, ci: ClairautIntegrals, rp: float, rq: float):
        self.ci = ci
        self.rp = rp
        self.rq = rq
        self.ap = float(ci.a.value(rp))
        self.aq = float(ci.a.value(rq))

    def crossings(self, theta, windings: int):
        """Arrays ``(t, dphi)`` of shape ``(len(theta), 2*windings)``; NaN where absent."""
        theta = np.atleast_1d(np.asarray(theta, float))
        c = self.ap * np.sin(theta)
        lo, hi = self.ci.band(c, self.rp)
        rp = np.clip(self.rp, lo, hi)
        reach = (self.rq >= lo - REACH_TOL) & (self.rq <= hi + REACH_TOL)
        rq = np.clip(self.rq, lo, hi)
        Th, Ph = self.ci.legs(c, lo, hi, hi)
        Tp, Pp = self.ci.legs(c, lo, hi, rp)
        Tq, Pq = self.ci.legs(c, lo, hi, rq)
        up = np.cos(theta) > 0
        tau0 = np.where(up, Tp, 2 * Th - Tp)
        phi0 = np.where(up, Pp, 2 * Ph - Pp)
        k = np.arange(windings)[None, :]
        tau = np.concatenate([Tq[:, None] + 2 * k * Th[:, None],
                              (2 * Th - Tq)[:, None] + 2 * k * Th[:, None]], axis=1)
        phi = np.concatenate([Pq[:, None] + 2 * k * Ph[:, None],
                              (2 * Ph - Pq)[:, None] + 2 * k * Ph[:, None]], axis=1)
        t = tau - tau0[:, None]
        dphi = phi - phi0[:, None]
        bad = (~reach)[:, None] | (t <= 1e-12)
        return np.where(bad, np.nan, t), np.where(bad, np.nan, dphi)


def connect(a: RadialFunction, p, q, directions: int = DEFAULT_DIRECTIONS,
            ci: ClairautIntegrals | None = None) -> Connection:
    """Shortest connecting curve found between ``p`` and ``q``.

    Candidates are the two pole routes, the meridian arc or parallel geodesic
    when ``q`` lies on one through ``p``, and every geodesic located by
    sweeping ``directions`` launch angles over ``(0, pi)`` and refining sign
    changes of the angular miss with Brent's method.
    """
    L = float(a.length)
    rp, rq = float(p[0]), float(q[0])
    if rp <= 0 or rq <= 0 or rp >= L or rq >= L:
        d = _pole_distance(L, rp, rq)
        return Connection(d, 0.0 if rp <= 0 else math.pi, "meridian")
    dphi = _fold(float(q[1]) - float(p[1]))

    best = Connection(rp + rq, None, "north pole route")
    south = Connection(2 * L - rp - rq, None, "south pole route")
    if south.length < best.length:
        best = south
    if dphi == 0.0:
        m = Connection(abs(rp - rq), 0.0 if rq > rp else math.pi, "meridian")
        best = m if m.length < best.length else best
    elif dphi == math.pi:
        best = Connection(best.length, 0.0 if best is south else math.pi, "meridian")
    if rp == rq and abs(float(a.df(np.asarray(rp)))) < 1e-12:
        par = Connection(float(a.value(rp)) * dphi, math.pi / 2, "parallel")
        best = par if par.length < best.length else best

    ci = ci or ClairautIntegrals(a)
    sweep = _Sweep(ci, rp, rq)
    targets = [dphi + TWO_PI * j for j in range(MAX_WINDINGS)]
    targets += [TWO_PI - dphi + TWO_PI * j for j in range(MAX_WINDINGS)]
    half = directions // 2
    for branch in (0, 1):
        theta = (np.arange(half) + 0.5) * (0.5 * math.pi / half) + branch * 0.5 * math.pi
        folds = _fold_angles(sweep)
        folds = folds[(folds > theta[0]) & (folds < theta[-1])]
        theta = np.sort(np.concatenate([theta, folds]))
        t, ph = sweep.crossings(theta, MAX_WINDINGS)
        for j in range(t.shape[1]):
            for target in targets:
                g = ph[:, j] - target
                ok = np.isfinite(g[:-1]) & np.isfinite(g[1:]) & (np.sign(g[:-1]) != np.sign(g[1:]))
                ok &= np.fmin(t[:-1, j], t[1:, j]) < best.length + 0.5
                for i in np.flatnonzero(ok):
                    cand = _refine(sweep, theta[i], theta[i + 1], j, target)
                    if cand is not None and cand.length < best.length:
                        best = cand
    return best


def _fold_angles(sweep: _Sweep) -> np.ndarray:
    """Launch angles at which crossings of ``r = rq`` are born in pairs.

    That happens when a turning radius passes through ``rq``, i.e. when the
    Clairaut constant equals ``a(rq)``.  A root can sit between the last
    regular sample and the fold, so both fold angles join the sweep.
    """
    ratio = sweep.aq / sweep.ap
    if not 0 < ratio < 1:
        return np.empty(0)
    th = math.asin(ratio)
    return np.array([th, math.pi - th])


def _refine(sweep: _Sweep, th0: float, th1: float, j: int, target: float):
    def miss(th):
        _, ph = sweep.crossings([th], MAX_WINDINGS)
        return ph[0, j] - target

    try:
        th = brentq(miss, th0, th1, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError:
        return None
    t, ph = sweep.crossings([th], MAX_WINDINGS)
    if not np.isfinite(t[0, j]) or abs(ph[0, j] - target) > 1e-8:
        return None
    return Connection(float(t[0, j]), float(th), "geodesic")


def _pole_distance(L: float, rp: float, rq: float) -> float:
    # the radial coordinate is the distance from the north pole
    if rp <= 0:
        return min(max(rq, 0.0), L)
    if rq <= 0:
        return min(max(rp, 0.0), L)
    if rp >= L:
        return L - min(rq, L)
    return L - min(rp, L)


def distance(a: RadialFunction, p, q, directions: int = DEFAULT_DIRECTIONS) -> float:
    return connect(a, p, q, directions).length


def diameter(a: RadialFunction, sample_density: int = 8, prune: bool = True,
             directions: int = DEFAULT_DIRECTIONS) -> float:
    """Largest sampled distance, one point on the meridian ``phi = 0``.

    Samples are ``sample_density`` radii (poles included) for both points and
    ``sample_density`` angular offsets in ``[0, pi]``.  With ``prune`` a pair is
    skipped once its pole-route bound cannot beat the running maximum.
    """
    if sample_density < 8:
        raise ValueError("sample_density must be >= 8")
    L = float(a.length)
    radii = np.linspace(a.start, a.length, sample_density)
    angles = np.linspace(0.0, math.pi, sample_density)
    ci = ClairautIntegrals(a)
    best = 0.0
    for rp in radii:
        for rq in radii:
            bound = pole_route_bound(a, rp - a.start, rq - a.start)
            if rp in (a.start, a.length) or rq in (a.start, a.length):
                bound = L
            for ang in angles:
                if prune and bound <= best:
                    break
                d = connect(a, (rp, 0.0), (rq, ang), directions, ci).length
                best = max(best, d)
    return best
