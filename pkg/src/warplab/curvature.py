"""Scalar curvature of doubly warped metrics ``dr^2 + a(r)^2 dphi^2 + b(r)^2 dx^2``.

The fiber ``dx^2`` is a flat ``(n-2)``-torus, so the total dimension is ``n``.
Interior values come from the logarithmic-derivative form of the curvature;
the two poles of the sphere factor are removable singularities of that form
and are handled by :func:`scal_pole_limit`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radial import RadialFunction, family_a, family_b


class DomainError(ValueError):
    """Input outside the domain where a formula is defined."""


POLE_COLLAR = 1e-3
DEFAULT_GRID = 2001
THIRD_DERIVATIVE_STEP = 1e-4
POLE_SLOPE_TOL = 1e-8
ARGMIN_TIE_TOL = 1e-9


def scal_multiwarp(a: RadialFunction, b: RadialFunction, n: int, r):
    """Scalar curvature at ``r`` of ``dr^2 + a^2 dphi^2 + b^2 dx^2`` on S^2 x T^(n-2).

    Vectorized over ``r`` and over any array-valued parameters of ``a`` and ``b``.
    """
    if n < 2:
        raise DomainError(f"dimension n={n} < 2")
    fa, da, d2a = a(r)
    fb, db, d2b = b(r)
    if np.any(fa == 0) or np.any(fb == 0):
        raise DomainError("warping factor vanishes; use scal_pole_limit at the poles")
    m = n - 2
    A = da / fa
    B = db / fb
    dA = d2a / fa - A**2
    dB = d2b / fb - B**2
    return -2 * (dA + m * dB) - A**2 - m * B**2 - (A + m * B) ** 2


def third_derivative(a: RadialFunction, r0: float, h: float = THIRD_DERIVATIVE_STEP):
    """``a'''(r0)`` by central differences of ``a''``, Richardson-extrapolated from h and h/2."""
    d_h = (a.d2f(np.asarray(r0 + h)) - a.d2f(np.asarray(r0 - h))) / (2 * h)
    h2 = h / 2
    d_h2 = (a.d2f(np.asarray(r0 + h2)) - a.d2f(np.asarray(r0 - h2))) / (2 * h2)
    return (4 * d_h2 - d_h) / 3


def pole_gauss_curvature(a: RadialFunction, pole: float = 0.0):
    """Gauss curvature ``-a'''/a'`` of ``dr^2 + a^2 dphi^2`` at a pole where ``a`` vanishes."""
    slope = a.df(np.asarray(pole, dtype=float))
    return -third_derivative(a, pole) / slope


def scal_pole_limit(a: RadialFunction, b: RadialFunction, n: int, pole: float | None = None):
    """Limit of :func:`scal_multiwarp` at a pole of the sphere factor.

    ``pole`` defaults to ``a.start``; pass ``a.length`` for the far pole. Requires
    ``a(pole) = 0``, ``|a'(pole)| = 1`` and ``b'(pole) = 0``, i.e. a smooth metric.
    """
    if n < 2:
        raise DomainError(f"dimension n={n} < 2")
    p = a.start if pole is None else float(pole)
    fa, da, _ = a(p)
    fb, db, d2b = b(p)
    if np.any(np.abs(fa) > POLE_SLOPE_TOL) or np.any(np.abs(np.abs(da) - 1) > POLE_SLOPE_TOL):
        raise DomainError(f"a does not close up smoothly at r={p}")
    if np.any(np.abs(db) > POLE_SLOPE_TOL):
        raise DomainError(f"b'({p}) != 0: metric is not smooth at the pole")
    K = -third_derivative(a, p) / da
    return 2 * K - 4 * (n - 2) * d2b / fb


def scal_numerical_limit(a: RadialFunction, b: RadialFunction, n: int, h: float = 1e-4):
    """Limit at ``r = 0`` from interior values at ``h`` and ``h/2``.

    scal is even in r for a smooth metric, so Richardson extrapolation of the
    two samples removes the ``r^2`` term that dominates a single sample.
    """
    return (4 * scal_multiwarp(a, b, n, h / 2) - scal_multiwarp(a, b, n, h)) / 3


@dataclass(frozen=True)
class WarpFamilyParams:
    """Two-mode deformation ``a = (sin r + alpha sin 3r)/(1+3alpha)``, ``b = 1 + beta sin^2 r``."""

    n: int
    alpha: float
    beta: float
    s: float | None = None

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"dimension n={self.n} < 2")
        if not (-1 / 3 < self.alpha < 1):
            raise DomainError(f"alpha={self.alpha} outside (-1/3, 1)")
        if not self.beta > -1:
            raise DomainError(f"beta={self.beta} outside (-1, inf)")
        if self.s is not None and self.s < 0:
            raise DomainError(f"segment parameter s={self.s} < 0")

    @staticmethod
    def corner(n: int) -> tuple[float, float]:
        return (n - 2) / (3 * (3 * n - 2)), 1 / (2 * (n - 1))

    @classmethod
    def from_s(cls, n: int, s: float) -> "WarpFamilyParams":
        ca, cb = cls.corner(n)
        return cls(n, s * ca, s * cb, s)

    @property
    def a(self) -> RadialFunction:
        return family_a(self.alpha)

    @property
    def b(self) -> RadialFunction:
        return family_b(self.beta)


def scal_pole_closed_form(params: WarpFamilyParams) -> float:
    """Family curvature at r = 0 in the unsimplified rational form."""
    n, al, be = params.n, params.alpha, params.beta
    num = math.fsum([2.0, -4 * be * (n - 2) * (6 * al + 2), 54 * al])
    return num / (1 + 3 * al)


def scal_equator_closed_form(params: WarpFamilyParams) -> float:
    """Family curvature at r = pi/2."""
    n, al, be = params.n, params.alpha, params.beta
    num = math.fsum([1.0, -9 * al, -3 * be, -5 * al * be, 2 * n * be, -2 * n * al * be])
    return 2 * num / ((1 - al) * (1 + be))


def scal_s_derivative(n: int, r):
    """Derivative in s at s = 0 of the segment family's curvature at radius r."""
    r = np.asarray(r, dtype=float)
    return (n - 2) * ((7 * n - 10) + (5 * n - 14) * np.cos(2 * r)) / (3 * (n - 1) * (3 * n - 2))


def s_derivative_lower_bound(n: int) -> float:
    return (n - 2) * (2 * n + 4) / (3 * (n - 1) * (3 * n - 2))


def fcs_identity_residual(a: RadialFunction, f: RadialFunction, r):
    """``scal(g + f^2 dtheta^2) - (scal_g - 2 Lap f / f)`` for radial f on ``dr^2 + a^2 dphi^2``."""
    fa, da, d2a = a(r)
    ff, df, d2f = f(r)
    if np.any(ff <= 0):
        raise DomainError("f must be positive")
    lhs = scal_multiwarp(a, f, 3, r)
    laplacian = d2f + (da / fa) * df
    return lhs - (-2 * d2a / fa - 2 * laplacian / ff)


@dataclass(frozen=True)
class CurvatureProfile:
    grid: np.ndarray
    values: np.ndarray
    pole_values: tuple[float, float]
    min_value: float
    argmin: float

    def all_values(self) -> tuple[np.ndarray, np.ndarray]:
        """Radii and values including both poles, in increasing radius."""
        r = np.concatenate([[0.0], self.grid, [np.pi]])
        v = np.concatenate([[self.pole_values[0]], self.values, [self.pole_values[1]]])
        return r, v


def profile_grid(grid_size: int = DEFAULT_GRID, collar: float = POLE_COLLAR) -> np.ndarray:
    if grid_size < 3:
        raise DomainError("grid_size must be >= 3")
    return np.linspace(collar, np.pi - collar, grid_size)


def curvature_profile(params: WarpFamilyParams, grid_size: int = DEFAULT_GRID) -> CurvatureProfile:
    grid = profile_grid(grid_size)
    a, b = params.a, params.b
    values = scal_multiwarp(a, b, params.n, grid)
    north = float(scal_pole_limit(a, b, params.n, 0.0))
    south = float(scal_pole_limit(a, b, params.n, np.pi))
    r, v = np.concatenate([[0.0], grid, [np.pi]]), np.concatenate([[north], values, [south]])
    vmin = float(v.min())
    # near-ties (the two poles agree up to rounding) resolve to the smallest radius
    i = int(np.argmax(v <= vmin + ARGMIN_TIE_TOL))
    return CurvatureProfile(grid, values, (north, south), vmin, float(r[i]))


def family_min_scal(n: int, alpha, beta, grid_size: int = DEFAULT_GRID) -> np.ndarray:
    """Minimum curvature over grid and poles for arrays of (alpha, beta); broadcasts."""
    alpha, beta = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(beta, float))
    shape = alpha.shape
    al = alpha.reshape(-1, 1)
    be = beta.reshape(-1, 1)
    a, b = family_a(al), family_b(be)
    grid = profile_grid(grid_size)[None, :]
    interior = scal_multiwarp(a, b, n, grid).min(axis=1)
    north = scal_pole_limit(a, b, n, 0.0).ravel()
    south = scal_pole_limit(a, b, n, np.pi).ravel()
    return np.minimum(interior, np.minimum(north, south)).reshape(shape)
