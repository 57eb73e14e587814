"""Geodesic flow and Jacobi fields on ``dr^2 + a(r)^2 dphi^2``.

Away from the poles the flow is integrated in polar coordinates with an
embedded Runge-Kutta pair.  Inside the collar ``r < eps`` (or ``r > L - eps``)
the polar chart degenerates, so a passage past the pole is continued with
the Clairaut quadratures instead: the trajectory is symmetric about its
turning radius, and a meridian simply runs through the pole and comes out
on the opposite meridian.  Jacobi fields are carried through the collar with
the (constant to second order) Gauss curvature at the pole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..curvature import POLE_COLLAR, pole_gauss_curvature
from ..radial import RadialFunction
from .clairaut import ClairautIntegrals

RTOL = 1e-10
ATOL = 1e-12
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class GeodesicState:
    r: float
    phi: float
    dr: float
    dphi: float
    clairaut: float

    def reversed(self) -> "GeodesicState":
        return GeodesicState(self.r, self.phi, -self.dr, -self.dphi, -self.clairaut)


@dataclass(frozen=True)
class GeodesicPath:
    states: tuple[GeodesicState, ...]
    arc_lengths: np.ndarray
    # False when the integrator gave up before the requested length
    complete: bool = True

    @property
    def end(self) -> GeodesicState:
        return self.states[-1]

    @property
    def length(self) -> float:
        return float(self.arc_lengths[-1])


def reflect(a: RadialFunction) -> RadialFunction:
    """The same profile seen from the far pole, ``r -> L - r``."""
    L = a.length
    return RadialFunction(lambda r: a.f(L - r), lambda r: -a.df(L - r), lambda r: a.d2f(L - r),
                          length=L, start=a.start, name=f"reflected {a.name}")


def pole_model(K: float, extent: float) -> RadialFunction:
    """Profile ``x - K x^3 / 6`` near a pole of Gauss curvature ``K``.

    Agrees with the true profile to ``O(x^5)`` and, unlike ``a(L - x)``, keeps
    full relative precision as ``x -> 0``.
    """
    return RadialFunction(lambda x: x - K * x**3 / 6, lambda x: 1 - K * x**2 / 2, lambda x: -K * x,
                          length=extent, name=f"pole model K={K}")


def _jacobi_step(K: float, J: float, dJ: float, tau: float):
    """Propagate ``J'' + K J = 0`` for time ``tau``; also the first zero in ``(0, tau]`` or None."""
    if K > 1e-14:
        w = math.sqrt(K)
        c, s = math.cos(w * tau), math.sin(w * tau)
        Jn, dJn = J * c + dJ * s / w, -J * w * s + dJ * c
        # J = R cos(w t - d); first t > 0 with w t - d = pi/2 mod pi
        d = math.atan2(dJ / w, J)
        t0 = math.fmod(0.5 * math.pi + d, math.pi)
        if t0 <= 0:
            t0 += math.pi
        zero = t0 / w if t0 / w <= tau else None
    elif K < -1e-14:
        w = math.sqrt(-K)
        ch, sh = math.cosh(w * tau), math.sinh(w * tau)
        Jn, dJn = J * ch + dJ * sh / w, J * w * sh + dJ * ch
        zero = None
        # tanh(w t) = -J w / dJ has a positive root only when J and dJ differ in sign
        if J * dJ < 0 and abs(J * w / dJ) < 1:
            t0 = math.atanh(-J * w / dJ) / w
            zero = t0 if 0 < t0 <= tau else None
    else:
        Jn, dJn = J + dJ * tau, dJ
        zero = -J / dJ if dJ != 0 and 0 < -J / dJ <= tau else None
    return Jn, dJn, zero


class GeodesicFlow:
    """Geodesic and Jacobi integration for one sphere profile ``a`` with ``a(0) = a(L) = 0``."""

    def __init__(self, a: RadialFunction, collar: float = POLE_COLLAR):
        self.a = a
        self.L = float(a.length)
        self.eps = collar
        self._ends = {}
        for side, prof in (("north", a), ("south", reflect(a))):
            K = float(pole_gauss_curvature(prof, 0.0))
            model = pole_model(K, 8 * collar)
            self._ends[side] = (model, ClairautIntegrals(model, grid_points=65), K)

    def state_at(self, r: float, phi: float, direction_angle: float) -> GeodesicState:
        """Unit-speed state; the angle is measured from the outward meridian towards increasing phi.

        At a pole the angle is the launch meridian instead.
        """
        if r <= 0:
            return GeodesicState(0.0, direction_angle, 1.0, 0.0, 0.0)
        if r >= self.L:
            return GeodesicState(self.L, direction_angle, -1.0, 0.0, 0.0)
        ar = float(self.a.value(r))
        c = ar * math.sin(direction_angle)
        return GeodesicState(r, phi, math.cos(direction_angle), c / ar**2, c)

    def _state(self, r, phi, rho, c) -> GeodesicState:
        ar = float(self.a.value(r)) if 0 < r < self.L else 0.0
        return GeodesicState(r, phi, rho, c / ar**2 if ar > 0 else 0.0, c)

    def run(self, state: GeodesicState, length: float, jacobi: bool = False):
        """Integrate ``length``; returns (path, first Jacobi zero or None).

        With ``jacobi`` the field starts at J = 0, J' = 1 and integration stops
        at its first zero.
        """
        if length <= 0:
            raise ValueError("length must be positive")
        eps, L = self.eps, self.L
        t, r, phi, rho, c = 0.0, state.r, state.phi, state.dr, state.clairaut
        J, dJ = 0.0, 1.0
        times, states = [0.0], [state]

        def record(tt, st):
            if tt > times[-1]:
                times.append(tt)
                states.append(st)

        # launch from a pole: straight out along the meridian through the collar
        if r <= 0 or r >= L:
            side = "north" if r <= 0 else "south"
            K = self._ends[side][2]
            tau = min(eps, length)
            J, dJ, zero = _jacobi_step(K, J, dJ, tau)
            if jacobi and zero is not None:
                rr = zero if side == "north" else L - zero
                record(zero, self._state(rr, phi, rho, 0.0))
                return self._path(times, states), zero
            t = tau
            r = tau if side == "north" else L - tau
            record(t, self._state(r, phi, rho, 0.0))

        while t < length * (1 - 1e-15):
            entering_north = r <= eps * (1 + 1e-12) and rho < 0
            entering_south = r >= L - eps * (1 + 1e-12) and rho > 0
            if entering_north or entering_south:
                side = "north" if entering_north else "south"
                x = r if entering_north else L - r
                out = self._passage(side, x, c, length - t)
                xe, dphi, rho_local, tau = out
                K = self._ends[side][2]
                J, dJ, zero = _jacobi_step(K, J, dJ, tau)
                if jacobi and zero is not None:
                    xe, dphi, rho_local, _ = self._passage(side, x, c, zero)
                    tau = zero
                phi += dphi
                r = xe if side == "north" else L - xe
                rho = rho_local if side == "north" else -rho_local
                t += tau
                record(t, self._state(r, phi, rho, c))
                if jacobi and zero is not None:
                    return self._path(times, states), t
                continue
            sol = self._ode(t, length, r, phi, rho, c, J, dJ, jacobi)
            for k in range(1, len(sol.t)):
                y = sol.y[:, k]
                record(float(sol.t[k]), self._state(float(y[0]), float(y[1]), float(y[2]), c))
            if sol.status == -1:
                return self._path(times, states, complete=False), None
            y = sol.y[:, -1]
            t, r, phi, rho, J, dJ = float(sol.t[-1]), *map(float, y)
            if sol.status == 1:
                if jacobi and sol.t_events[2].size:
                    return self._path(times, states), float(sol.t_events[2][0])
                # snap onto the collar boundary the event located
                r = eps if sol.t_events[0].size else L - eps
        return self._path(times, states), None

    def _path(self, times, states, complete=True) -> GeodesicPath:
        return GeodesicPath(tuple(states), np.asarray(times), complete)

    def _ode(self, t0, t1, r, phi, rho, c, J, dJ, jacobi):
        a, eps, L = self.a, self.eps, self.L
        c2 = c * c

        def rhs(_, y):
            fa, da, d2a = a(y[0])
            return [y[2], c / fa**2, c2 * da / fa**3, y[4], d2a / fa * y[3]]

        def north(_, y):
            return y[0] - eps

        def south(_, y):
            return y[0] - (L - eps)

        def zero(_, y):
            return y[3]

        north.terminal, north.direction = True, -1
        south.terminal, south.direction = True, 1
        zero.terminal, zero.direction = jacobi, -1
        return solve_ivp(rhs, (t0, t1), [r, phi, rho, J, dJ], method="RK45", rtol=RTOL, atol=ATOL,
                         events=[north, south, zero])

    def _passage(self, side: str, x: float, c: float, budget: float):
        """Pass the pole on ``side``, entering the collar at distance ``x`` from it moving inward.

        Returns (exit distance from pole, phi increment, outward radial speed, time used),
        stopping early if ``budget`` runs out.  Radial speed is measured away from the pole.
        """
        eps = self.eps
        prof, ci, _ = self._ends[side]
        if c == 0.0:
            tau = x + eps
            if budget < tau:
                if budget <= x:
                    return x - budget, 0.0, -1.0, budget
                return budget - x, math.pi, 1.0, budget
            return eps, math.pi, 1.0, tau
        sign = math.copysign(1.0, c)
        # closest approach: solve x - K x^3/6 = |c| by Newton from |c|
        lo = abs(c)
        for _ in range(6):
            lo -= (float(prof.value(lo)) - abs(c)) / float(prof.df(lo))
        lo = min(lo, x)
        hi = prof.length
        T, P = ci.legs(abs(c), lo, hi, np.array([x, eps]))
        Tx, Te, Px, Pe = float(T[0]), float(T[1]), float(P[0]), float(P[1])
        tau = Tx + Te

        def speed(y):
            return math.sqrt(max(0.0, 1.0 - (c / float(prof.value(y))) ** 2))

        if budget >= tau:
            return eps, sign * (Px + Pe), speed(eps), tau

        def position(target):
            if target <= 0:
                return lo, 0.0
            y = brentq(lambda z: float(ci.legs(abs(c), lo, hi, z)[0][0]) - target, lo, max(x, eps),
                       xtol=1e-15, rtol=4 * np.finfo(float).eps)
            return y, float(ci.legs(abs(c), lo, hi, y)[1][0])

        if budget <= Tx:
            y, Py = position(Tx - budget)
            return y, sign * (Px - Py), -speed(y), budget
        y, Py = position(budget - Tx)
        return y, sign * (Px + Py), speed(y), budget


def shoot_geodesic(a: RadialFunction, start, direction_angle: float, length: float,
                   flow: GeodesicFlow | None = None) -> GeodesicPath:
    """Unit-speed geodesic of the given length from ``start = (r, phi)``.

    The launch angle is measured from the outward meridian towards increasing
    phi; from a pole it names the meridian to leave along.
    """
    flow = flow or GeodesicFlow(a)
    state = flow.state_at(float(start[0]), float(start[1]), direction_angle)
    return flow.run(state, length)[0]


def shoot_from_state(a: RadialFunction, state: GeodesicState, length: float,
                     flow: GeodesicFlow | None = None) -> GeodesicPath:
    flow = flow or GeodesicFlow(a)
    return flow.run(state, length)[0]


def conjugate_radius(a: RadialFunction, start, direction_angle: float, max_length: float,
                     flow: GeodesicFlow | None = None) -> float | None:
    """Arc length to the first zero of the normal Jacobi field with J(0) = 0, J'(0) = 1."""
    flow = flow or GeodesicFlow(a)
    state = flow.state_at(float(start[0]), float(start[1]), direction_angle)
    return flow.run(state, max_length, jacobi=True)[1]


def closed_parallels(a: RadialFunction, grid_points: int = 4097) -> list[tuple[float, float]]:
    """Parallels ``r = const`` that are geodesics, i.e. roots of ``a'``, with their lengths."""
    g = np.linspace(a.start, a.length, grid_points)[1:-1]
    d = a.df(g)
    roots = [float(x) for x in g[d == 0]]
    for i in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
        roots.append(brentq(lambda x: float(a.df(np.asarray(x))), g[i], g[i + 1], xtol=1e-13))
    roots.sort()
    return [(r, TWO_PI * float(a.value(r))) for r in roots]


@dataclass(frozen=True)
class InjectivityReport:
    conjugate_radius: float
    half_systole: float
    inj_estimate: float
    witnesses: tuple[str, ...]


def injectivity_radius(a: RadialFunction, angular_samples: int = 16, base_samples: int = 8) -> InjectivityReport:
    """Upper estimate ``min(conjugate radius, half the shortest closed geodesic)``.

    Conjugate points are sought along geodesics leaving ``base_samples`` radii
    (poles included) in ``angular_samples`` directions over ``[0, pi]``; by the
    reflection ``phi -> -phi`` those cover all directions.  Closed geodesics
    considered are the geodesic parallels and the meridian loop through both
    poles.  Ties go to the witness at the smallest radius.
    """
    if angular_samples < 16 or base_samples < 8:
        raise ValueError("need angular_samples >= 16 and base_samples >= 8")
    flow = GeodesicFlow(a)
    L = flow.L
    cap = 2 * L
    conj, conj_witness = math.inf, "no conjugate point within 2L"
    for r in np.linspace(a.start, L, base_samples):
        angles = [0.0] if r in (a.start, L) else np.linspace(0.0, math.pi, angular_samples)
        for th in angles:
            d = conjugate_radius(a, (r, 0.0), float(th), cap, flow)
            if d is not None and d < conj - 1e-12:
                conj = d
                conj_witness = f"conjugate point at distance {d!r} from r={float(r)!r}, angle {float(th)!r}"

    half, half_witness = L, f"meridian loop of length {2 * L!r}"
    for r, length in closed_parallels(a):
        if 0.5 * length < half - 1e-12:
            half = 0.5 * length
            half_witness = f"closed parallel at r={r!r} of length {length!r}"
    inj = min(conj, half)
    return InjectivityReport(conj, half, inj, (conj_witness, half_witness))


def projection_nonexpansion_check(a: RadialFunction, b: RadialFunction, n: int, trials: int = 200,
                                  seed: int = 0, mode: str = "random", modes: int = 4,
                                  nodes: int = 96) -> float:
    """Least value of ``L(c) - L(projection of c)`` over random curves in ``S^2 x T^(n-2)``.

    Curves are trigonometric polynomials in ``t`` on ``[0, 1]``.  ``mode`` is
    ``random``, ``constant_torus`` (torus coordinates frozen, so both lengths
    agree) or ``torus_only`` (base point frozen, so the projection is a point).
    Torus amplitudes are scaled by a log-uniform factor in ``[1e-8, 1]``.
    Both lengths use the same Gauss-Legendre nodes.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if mode not in ("random", "constant_torus", "torus_only"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    x, w = np.polynomial.legendre.leggauss(nodes)
    t, w = 0.5 * (x + 1), 0.5 * w
    k = np.arange(1, modes + 1)
    L = float(a.length)

    def trig(coef_c, coef_s):
        arg = TWO_PI * np.multiply.outer(t, k)
        val = np.cos(arg) @ coef_c + np.sin(arg) @ coef_s
        der = TWO_PI * (-np.sin(arg) @ (coef_c * k) + np.cos(arg) @ (coef_s * k))
        return val, der

    worst = math.inf
    for _ in range(trials):
        u, du = trig(*rng.normal(size=(2, modes)))
        # keep the base curve away from the poles, where the polar chart is singular
        r = a.start + L * (0.5 + 0.45 * np.sin(u))
        dr = L * 0.45 * np.cos(u) * du
        phi, dphi = trig(*rng.normal(size=(2, modes)))
        dx = np.stack([trig(*rng.normal(size=(2, modes)))[1] for _ in range(n - 2)], axis=1) if n > 2 \
            else np.zeros((len(t), 0))
        # spread torus amplitudes over decades so some curves sit close to equality
        dx *= 10.0 ** rng.uniform(-8, 0)
        if mode == "constant_torus":
            dx = np.zeros_like(dx)
        elif mode == "torus_only":
            dr = np.zeros_like(dr)
            dphi = np.zeros_like(dphi)
        base = dr**2 + a.value(r) ** 2 * dphi**2
        fiber = b.value(r) ** 2 * np.sum(dx**2, axis=1)
        diff = float(w @ np.sqrt(base + fiber) - w @ np.sqrt(base))
        worst = min(worst, diff)
    return worst
