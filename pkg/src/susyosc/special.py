"""Generalized Laguerre polynomials and log-gamma.

All functions accept scalars or numpy arrays for the argument ``x`` and
broadcast in the usual way.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["laguerre", "laguerre_derivative", "log_gamma", "log_gamma_ratio"]


def laguerre(n: int, a: float, x):
    """Evaluate L_n^a(x) by the three-term recurrence in the degree.

    (m+1) L_{m+1} = (2m+1+a-x) L_m - (m+a) L_{m-1}
    """
    if n < 0:
        raise ValueError(f"Laguerre degree must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + a - x) * cur - (m + a) * prev) / (m + 1)
    return cur if cur.ndim else float(cur)


def laguerre_derivative(n: int, a: float, x):
    """d/dx L_n^a(x) = -L_{n-1}^{a+1}(x); identically zero for n = 0."""
    if n < 0:
        raise ValueError(f"Laguerre degree must be nonnegative, got {n}")
    if n == 0:
        z = np.zeros_like(np.asarray(x, dtype=float))
        return z if z.ndim else 0.0
    return -laguerre(n - 1, a + 1.0, x)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_gamma_ratio(num: list[float], den: list[float]) -> float:
    """log(prod Gamma(num) / prod Gamma(den)), all arguments positive."""
    return sum(log_gamma(v) for v in num) - sum(log_gamma(v) for v in den)
