"""Smooth functions of the radial coordinate.

A :class:`RadialFunction` bundles a value with its first two derivatives.
Every callable is numpy-vectorized and broadcasts against array-valued
parameters, so a family member built from an ``(k, 1)`` array of
coefficients evaluates on a ``(1, m)`` grid in one call.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialFunction:
    f: ArrayFn
    df: ArrayFn
    d2f: ArrayFn
    # end of the radial domain; for sphere profiles this is the second pole
    length: float = np.pi
    start: float = 0.0
    name: str = field(default="radial", compare=False)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.f(r), self.df(r), self.d2f(r)

    def value(self, r):
        return self.f(np.asarray(r, dtype=float))


def constant(c: float = 1.0, length: float = np.pi) -> RadialFunction:
    def f(r):
        return np.full(np.shape(r), c, dtype=float)

    def zero(r):
        return np.zeros(np.shape(r))

    return RadialFunction(f, zero, zero, length=length, name=f"const({c})")


def sphere(curvature: float = 1.0) -> RadialFunction:
    """Profile ``sin(k r)/k`` of the round sphere with Gauss curvature ``k**2``."""
    k = np.sqrt(curvature)
    return RadialFunction(
        lambda r: np.sin(k * r) / k,
        lambda r: np.cos(k * r),
        lambda r: -k * np.sin(k * r),
        length=np.pi / k,
        name=f"sphere(K={curvature})",
    )


def family_a(alpha) -> RadialFunction:
    """``(sin r + alpha sin 3r) / (1 + 3 alpha)``; a smooth sphere profile for alpha in (-1/3, 1)."""
    alpha = np.asarray(alpha, dtype=float)
    norm = 1.0 + 3.0 * alpha
    return RadialFunction(
        lambda r: (np.sin(r) + alpha * np.sin(3 * r)) / norm,
        lambda r: (np.cos(r) + 3 * alpha * np.cos(3 * r)) / norm,
        lambda r: -(np.sin(r) + 9 * alpha * np.sin(3 * r)) / norm,
        name="family_a",
    )


def family_b(beta) -> RadialFunction:
    """``1 + beta sin^2 r``; positive for beta > -1."""
    beta = np.asarray(beta, dtype=float)
    return RadialFunction(
        lambda r: 1.0 + beta * np.sin(r) ** 2,
        lambda r: beta * np.sin(2 * r),
        lambda r: 2 * beta * np.cos(2 * r),
        name="family_b",
    )


def band_profile(n: int) -> RadialFunction:
    """``cos(n t / 2) ** (2 / n)`` on ``(-pi/n, pi/n)``.

    With ``a = b`` this gives the model band ``dt^2 + cos(nt/2)^(4/n) dx^2``
    whose scalar curvature is identically ``n(n-1)``.
    """
    p = 2.0 / n
    half = n / 2.0

    def f(t):
        return np.cos(half * t) ** p

    def df(t):
        u = half * t
        return -np.cos(u) ** (p - 1) * np.sin(u)

    def d2f(t):
        u = half * t
        c = np.cos(u)
        return half * ((p - 1) * c ** (p - 2) * np.sin(u) ** 2 - c**p)

    return RadialFunction(f, df, d2f, length=np.pi / n, start=-np.pi / n, name=f"band({n})")


def trig_polynomial(c0: float, cos_coeffs, sin_coeffs, length: float = np.pi) -> RadialFunction:
    """``c0 + sum_k cos_coeffs[k] cos((k+1) r) + sin_coeffs[k] sin((k+1) r)``."""
    cos_coeffs = np.asarray(cos_coeffs, dtype=float)
    sin_coeffs = np.asarray(sin_coeffs, dtype=float)
    ks = np.arange(1, max(len(cos_coeffs), len(sin_coeffs)) + 1, dtype=float)
    cc = np.zeros(len(ks))
    ss = np.zeros(len(ks))
    cc[: len(cos_coeffs)] = cos_coeffs
    ss[: len(sin_coeffs)] = sin_coeffs

    def terms(r, deriv):
        r = np.asarray(r, dtype=float)
        x = np.multiply.outer(r, ks)
        if deriv == 0:
            out = np.cos(x) @ cc + np.sin(x) @ ss
            return out + c0
        if deriv == 1:
            return -np.sin(x) @ (cc * ks) + np.cos(x) @ (ss * ks)
        return -np.cos(x) @ (cc * ks**2) - np.sin(x) @ (ss * ks**2)

    return RadialFunction(
        lambda r: terms(r, 0),
        lambda r: terms(r, 1),
        lambda r: terms(r, 2),
        length=length,
        name="trig",
    )


def odd_sine_series(coeffs, length: float = np.pi) -> RadialFunction:
    """Sphere profile ``sum_k c_k sin((2k+1) r) / sum_k (2k+1) c_k``.

    Odd harmonics keep the profile symmetric about the equator, odd at both
    poles and normalized to unit slope at ``r = 0``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    ks = 2 * np.arange(len(coeffs)) + 1.0
    norm = float(coeffs @ ks)
    scale = np.pi / length

    def f(r):
        return np.sin(np.multiply.outer(np.asarray(r) * scale, ks)) @ coeffs / (norm * scale)

    def df(r):
        return np.cos(np.multiply.outer(np.asarray(r) * scale, ks)) @ (coeffs * ks) / norm

    def d2f(r):
        return -np.sin(np.multiply.outer(np.asarray(r) * scale, ks)) @ (coeffs * ks**2) * scale / norm

    return RadialFunction(f, df, d2f, length=length, name="odd_sine")
