"""Exploration of the two-mode deformation family in the (alpha, beta) plane.

Region labels follow the conventions of the source exploration: ``R0`` is the
set where the equator curvature is at least 2 and ``Rpi2`` the set where the
pole curvature is; the names look swapped against their conditions but are
kept so outputs line up with the published figures.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .bounds import scaled_inj
from .curvature import (
    DEFAULT_GRID,
    WarpFamilyParams,
    curvature_profile,
    family_min_scal,
    scal_equator_closed_form,
    scal_pole_closed_form,
)
from .revolution.distance import diameter
from .revolution.geodesic import injectivity_radius

DEFAULT_ALPHA_RANGE = (-0.05, 0.15)
DEFAULT_BETA_RANGE = (-0.1, 0.4)
MIN_SCAL_TOL = 1e-9
DIAMETER_TOL = 1e-3

CELL_FIELDS = ("alpha", "beta", "scal0", "scal_equator", "min_scal", "in_R0", "in_Rpi2", "in_both")


@dataclass(frozen=True)
class RegionGrid:
    n: int
    alpha_range: tuple[float, float]
    beta_range: tuple[float, float]
    resolution: tuple[int, int]
    # arrays of shape resolution, indexed [alpha, beta], evaluated at cell centres
    alpha: np.ndarray
    beta: np.ndarray
    scal0: np.ndarray
    scal_equator: np.ndarray
    min_scal: np.ndarray
    in_R0: np.ndarray
    in_Rpi2: np.ndarray
    in_both: np.ndarray

    def cell_index(self, alpha: float, beta: float) -> tuple[int, int]:
        """Index of the cell containing ``(alpha, beta)``."""
        idx = []
        for x, (lo, hi), m in ((alpha, self.alpha_range, self.resolution[0]),
                               (beta, self.beta_range, self.resolution[1])):
            if not lo <= x <= hi:
                raise ValueError(f"{x} outside [{lo}, {hi}]")
            idx.append(min(int((x - lo) / (hi - lo) * m), m - 1))
        return idx[0], idx[1]

    def cell(self, i: int, j: int) -> dict:
        return {f: getattr(self, f)[i, j].item() for f in CELL_FIELDS}

    def rows(self):
        na, nb = self.resolution
        for i in range(na):
            for j in range(nb):
                yield self.cell(i, j)


def _centres(lo: float, hi: float, m: int) -> np.ndarray:
    return lo + (np.arange(m) + 0.5) * ((hi - lo) / m)


def _check_window(alpha_range, beta_range):
    if not (-1 / 3 < alpha_range[0] < alpha_range[1] < 1):
        raise ValueError(f"alpha range {alpha_range} not inside (-1/3, 1)")
    if not (-1 < beta_range[0] < beta_range[1]):
        raise ValueError(f"beta range {beta_range} not inside (-1, inf)")


def scan_region(n: int, alpha_range=DEFAULT_ALPHA_RANGE, beta_range=DEFAULT_BETA_RANGE,
                resolution=(128, 128), grid_size: int = DEFAULT_GRID, workers: int | None = None) -> RegionGrid:
    """Classify cell centres of the rectangle by the endpoint and full-profile conditions.

    Endpoint values come from the closed forms; ``min_scal`` from the dense
    radial grid plus both pole limits.  ``in_both`` additionally requires
    ``min_scal >= 2 - 1e-9``, so it never relies on where the minimum sits.
    Rows of the grid are independent; with ``workers`` they are computed on a
    thread pool and written to their own slots, so results do not depend on it.
    """
    alpha_range, beta_range = tuple(map(float, alpha_range)), tuple(map(float, beta_range))
    _check_window(alpha_range, beta_range)
    na, nb = (resolution, resolution) if isinstance(resolution, int) else map(int, resolution)
    if na < 16 or nb < 16:
        raise ValueError("resolution must be >= 16 per axis")
    al, be = np.meshgrid(_centres(*alpha_range, na), _centres(*beta_range, nb), indexing="ij")

    scal0 = np.empty((na, nb))
    scal_eq = np.empty((na, nb))
    min_scal = np.empty((na, nb))

    def row(i):
        for j in range(nb):
            p = WarpFamilyParams(n, float(al[i, j]), float(be[i, j]))
            scal0[i, j] = scal_pole_closed_form(p)
            scal_eq[i, j] = scal_equator_closed_form(p)
        min_scal[i] = family_min_scal(n, al[i], be[i], grid_size)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(row, range(na)))
    else:
        for i in range(na):
            row(i)

    in_R0 = scal_eq >= 2
    in_Rpi2 = scal0 >= 2
    in_both = in_R0 & in_Rpi2 & (min_scal >= 2 - MIN_SCAL_TOL)
    return RegionGrid(n, alpha_range, beta_range, (na, nb), al, be, scal0, scal_eq, min_scal,
                      in_R0, in_Rpi2, in_both)


def corner_residual(n: int, alpha: float, beta: float) -> np.ndarray:
    p = WarpFamilyParams(n, alpha, beta)
    return np.array([scal_pole_closed_form(p) - 2, scal_equator_closed_form(p) - 2])


@dataclass(frozen=True)
class CornerSolve:
    roots: list[tuple[float, float]]
    # (seed, reason) for every seed that did not converge
    failures: list[tuple[tuple[float, float], str]]


NEWTON_STEP = 1e-7
NEWTON_ITERS = 60
ROOT_TOL = 1e-10
DEDUPE_TOL = 1e-8


def default_seeds(alpha_range=DEFAULT_ALPHA_RANGE, beta_range=DEFAULT_BETA_RANGE, m: int = 5):
    return [(float(a), float(b)) for a in np.linspace(*alpha_range, m) for b in np.linspace(*beta_range, m)]


def _newton(n: int, seed: tuple[float, float]):
    x = np.array(seed, dtype=float)
    h = NEWTON_STEP
    for _ in range(NEWTON_ITERS):
        try:
            F = corner_residual(n, *x)
            if np.max(np.abs(F)) < ROOT_TOL:
                return x, None
            J = np.empty((2, 2))
            for k in range(2):
                e = np.zeros(2)
                e[k] = h
                J[:, k] = (corner_residual(n, *(x + e)) - corner_residual(n, *(x - e))) / (2 * h)
            x = x - np.linalg.solve(J, F)
        except (ValueError, np.linalg.LinAlgError) as exc:
            return None, str(exc)
    return None, f"no convergence in {NEWTON_ITERS} iterations"


def solve_corner_system(n: int, seeds=None) -> CornerSolve:
    """Roots of (scal(0) - 2, scal(pi/2) - 2) by Newton with a central-difference Jacobian."""
    seeds = default_seeds() if seeds is None else seeds
    roots, failures = [], []
    for seed in seeds:
        x, why = _newton(n, seed)
        if x is None:
            failures.append((tuple(seed), why))
            continue
        if not any(math.hypot(x[0] - r[0], x[1] - r[1]) < DEDUPE_TOL for r in roots):
            roots.append((float(x[0]), float(x[1])))
    roots.sort()
    return CornerSolve(roots, failures)


@dataclass(frozen=True)
class CounterexampleCertificate:
    n: int
    s: float
    alpha: float
    beta: float
    min_scal: float
    diameter: float
    margin: float

    @property
    def valid(self) -> bool:
        return self.margin > 0 and self.diameter >= math.pi - DIAMETER_TOL

    def to_dict(self) -> dict:
        return {**asdict(self), "valid": self.valid}


def certify_counterexample(n: int, s: float, grid_size: int = DEFAULT_GRID,
                           sample_density: int = 8) -> CounterexampleCertificate:
    """Minimum curvature and diameter of the segment member at ``s``."""
    if s < 0:
        raise ValueError("s must be >= 0")
    p = WarpFamilyParams.from_s(n, s)
    prof = curvature_profile(p, grid_size)
    d = diameter(p.a, sample_density)
    return CounterexampleCertificate(n, float(s), p.alpha, p.beta, prof.min_value, d, prof.min_value - 2)


def sweep_segment(n: int, s_values, grid_size: int = DEFAULT_GRID, workers: int | None = None):
    s_values = [float(s) for s in s_values]
    if any(not 0 <= s <= 1 for s in s_values):
        raise ValueError("s values must lie in [0, 1]")
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda s: certify_counterexample(n, s, grid_size), s_values))
    return [certify_counterexample(n, s, grid_size) for s in s_values]


def rescaled_inj_trend(n: int, s_values, angular_samples: int = 16, base_samples: int = 8,
                       grid_size: int = DEFAULT_GRID) -> list[tuple[float, float]]:
    """``sqrt(min_scal / (n(n-1))) * inj`` along the segment."""
    s_values = [float(s) for s in s_values]
    if s_values != sorted(s_values) or (s_values and s_values[0] != 0):
        raise ValueError("s values must be ascending and start at 0")
    out = []
    for s in s_values:
        p = WarpFamilyParams.from_s(n, s)
        scal_min = curvature_profile(p, grid_size).min_value
        inj = injectivity_radius(p.a, angular_samples, base_samples).inj_estimate
        out.append((s, scaled_inj(scal_min, n, inj)))
    return out
