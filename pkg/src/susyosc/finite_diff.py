"""Sixth-order central differences of analytically evaluable functions.

Used only by verification code; transformation operators never differentiate
sampled data.
"""

from __future__ import annotations

import numpy as np

__all__ = ["second_derivative", "first_derivative", "adaptive_step"]

_D2 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_D1 = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
_OFFSETS = np.arange(-3, 4)


def adaptive_step(x, h_max: float = 1e-2, ratio: float = 30.0) -> np.ndarray:
    """Step no larger than h_max and x/ratio, so stencils stay inside x > 0."""
    x = np.asarray(x, dtype=float)
    return np.minimum(h_max, x / ratio)


def _stencil(f, x, h):
    x = np.asarray(x, dtype=float)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    pts = x[..., None] + _OFFSETS * h[..., None]
    return np.asarray(f(pts)), h


def second_derivative(f, x, h=None) -> np.ndarray:
    """f''(x) from a 7-point stencil; f must accept arrays."""
    h = adaptive_step(x) if h is None else h
    vals, h = _stencil(f, x, h)
    return vals @ _D2 / h**2


def first_derivative(f, x, h=None) -> np.ndarray:
    h = adaptive_step(x) if h is None else h
    vals, h = _stencil(f, x, h)
    return vals @ _D1 / h
