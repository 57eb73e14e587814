"""Clairaut-integral description of geodesics on ``dr^2 + a(r)^2 dphi^2``.

A geodesic with Clairaut constant ``c = a^2 phi'`` oscillates between the two
turning radii ``lo < hi`` where ``a = |c|``.  Between them

    t(x)   = int_lo^x a / sqrt(a^2 - c^2) dr
    phi(x) = int_lo^x c / (a sqrt(a^2 - c^2)) dr

Substituting ``r = lo + h (1 - cos tau)`` with ``h = (hi - lo)/2`` turns the
inverse square-root endpoint singularities into smooth integrands in ``tau``;
composite Gauss-Legendre panels, refined geometrically towards both ends,
resolve the sharp turn a geodesic makes when it grazes a pole.
"""
from __future__ import annotations

import numpy as np

from ..radial import RadialFunction

GL_ORDER = 16
END_PANELS = 10
BISECTION_STEPS = 52
NEWTON_STEPS = 2


class ClairautIntegrals:
    def __init__(self, a: RadialFunction, grid_points: int = 4097):
        self.a = a
        self.length = float(a.length)
        self.grid = np.linspace(a.start, a.length, grid_points)
        self.grid_values = a.value(self.grid)
        self._nodes, self._weights = np.polynomial.legendre.leggauss(GL_ORDER)

    def band(self, c, r0: float):
        """Turning radii ``lo <= r0 <= hi`` bounding the component of ``{a >= c}`` that holds r0."""
        c = np.atleast_1d(np.asarray(c, dtype=float))
        g, ga = self.grid, self.grid_values
        k = int(np.searchsorted(g, r0))
        # last grid node below r0 with a <= c; the pole node always qualifies
        below = ga[None, :k] <= c[:, None]
        i_lo = k - 1 - np.argmax(below[:, ::-1], axis=1)
        left = g[i_lo]
        right = np.minimum(g[np.minimum(i_lo + 1, len(g) - 1)], r0)
        lo = self._bisect(c, left, right, increasing=True)

        above = ga[None, k:] <= c[:, None]
        i_hi = k + np.argmax(above, axis=1)
        right = g[i_hi]
        left = np.maximum(g[np.maximum(i_hi - 1, 0)], r0)
        hi = self._bisect(c, left, right, increasing=False)
        return lo, hi

    def _bisect(self, c, left, right, increasing: bool):
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (left + right)
            v = self.a.value(mid) - c
            go_right = v < 0 if increasing else v > 0
            left = np.where(go_right, mid, left)
            right = np.where(go_right, right, mid)
        x = 0.5 * (left + right)
        # bisection resolves x only to an absolute ~1e-19; a turning radius
        # close to a pole needs relative accuracy, so polish with Newton
        width = right - left
        for _ in range(NEWTON_STEPS):
            slope = self.a.df(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = (self.a.value(x) - c) / slope
            ok = np.isfinite(step) & (np.abs(step) <= width)
            x = np.where(ok, x - step, x)
        return x

    def legs(self, c, lo, hi, x):
        """Arc length and angle swept from the lower turning radius ``lo`` up to radius ``x``."""
        c, lo, hi, x = np.broadcast_arrays(*(np.atleast_1d(np.asarray(v, float)) for v in (c, lo, hi, x)))
        h = 0.5 * (hi - lo)
        safe_h = np.where(h > 0, h, 1.0)
        tau_x = np.arccos(np.clip(1.0 - (x - lo) / safe_h, -1.0, 1.0))
        tau_x = np.where(h > 0, tau_x, 0.0)

        edges = self._panel_edges(lo, hi, safe_h, tau_x)
        left = edges[:, :-1, None]
        width = (edges[:, 1:] - edges[:, :-1])[..., None]
        tau = left + 0.5 * width * (self._nodes + 1.0)
        wts = 0.5 * width * self._weights
        tau_up = np.pi - tau

        hh = safe_h[:, None, None]
        lower = tau < 0.5 * np.pi
        r = np.where(lower,
                     lo[:, None, None] + 2 * hh * np.sin(0.5 * tau) ** 2,
                     hi[:, None, None] - 2 * hh * np.sin(0.5 * tau_up) ** 2)
        jac = hh * np.where(lower, np.sin(tau), np.sin(tau_up))
        ar = self.a.value(r)
        cc = np.abs(c)[:, None, None]
        gap = np.maximum((ar - cc) * (ar + cc), 1e-300)
        dens = jac / np.sqrt(gap)
        T = np.sum(ar * dens * wts, axis=(1, 2))
        P = np.sum(cc / ar * dens * wts, axis=(1, 2))
        return T, P

    def _panel_edges(self, lo, hi, h, tau_x):
        # feature scale near each turning radius is its distance to the pole
        near_lo = np.sqrt(2 * np.maximum(lo - self.a.start, 1e-300) / h) / 4
        near_hi = np.sqrt(2 * np.maximum(self.length - hi, 1e-300) / h) / 4
        grow = 4.0 ** np.arange(END_PANELS)
        low = np.minimum(near_lo[:, None] * grow, 0.5 * np.pi)
        up = np.pi - np.minimum(near_hi[:, None] * grow, 0.5 * np.pi)
        m = len(lo)
        edges = np.concatenate([np.zeros((m, 1)), low, up, np.full((m, 1), np.pi)], axis=1)
        edges = np.minimum(edges, tau_x[:, None])
        return np.sort(edges, axis=1)
