"""The four-dimensional Grassmann algebra on generators alpha, alpha_bar.

Elements are stored on the ordered basis (1, alpha, alpha_bar, alpha_bar alpha).
Conjugation preserves factor order: conj(b1 b2) = conj(b1) conj(b2), so
conj(alpha_bar alpha) = alpha alpha_bar = -alpha_bar alpha.

The array-level helpers (``mul``, ``conj``, ``parity_flip``) act on the last axis
of complex arrays of shape (..., 4), which is how the superspace module stores
supernumber-valued coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "Supernumber",
    "ONE",
    "ALPHA",
    "ALPHA_BAR",
    "TOP",
    "mul",
    "conj",
    "parity_flip",
    "gr_mul",
    "gr_conj",
    "gr_parity",
    "berezin",
    "as_coeffs",
]


def mul(a, b) -> np.ndarray:
    """Product of supernumber arrays (broadcast over leading axes)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    # alpha alpha_bar = -alpha_bar alpha; alpha_bar alpha is the top element
    return np.stack(
        [
            a0 * b0,
            a0 * b1 + a1 * b0,
            a0 * b2 + a2 * b0,
            a0 * b3 + a3 * b0 + a2 * b1 - a1 * b2,
        ],
        axis=-1,
    )


def conj(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    c = np.conj(a)
    return np.stack([c[..., 0], c[..., 2], c[..., 1], -c[..., 3]], axis=-1)


def parity_flip(a) -> np.ndarray:
    """beta -> beta_even - beta_odd, the sign picked up passing an odd object."""
    a = np.array(a, dtype=complex)
    a[..., 1:3] *= -1
    return a


@dataclass(frozen=True)
class Supernumber:
    c0: complex = 0j
    c1: complex = 0j
    c2: complex = 0j
    c3: complex = 0j

    @classmethod
    def from_array(cls, arr) -> "Supernumber":
        arr = np.asarray(arr, dtype=complex)
        if arr.shape != (4,):
            raise ValueError(f"expected 4 coefficients, got shape {arr.shape}")
        return cls(*(complex(v) for v in arr))

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2, self.c3], dtype=complex)

    @property
    def even(self) -> "Supernumber":
        return Supernumber(self.c0, 0j, 0j, self.c3)

    @property
    def odd(self) -> "Supernumber":
        return Supernumber(0j, self.c1, self.c2, 0j)

    def __add__(self, other):
        return Supernumber.from_array(self.coeffs + as_coeffs(other))

    __radd__ = __add__

    def __neg__(self):
        return Supernumber.from_array(-self.coeffs)

    def __sub__(self, other):
        return Supernumber.from_array(self.coeffs - as_coeffs(other))

    def __rsub__(self, other):
        return Supernumber.from_array(as_coeffs(other) - self.coeffs)

    def __mul__(self, other):
        return Supernumber.from_array(mul(self.coeffs, as_coeffs(other)))

    def __rmul__(self, other):
        return Supernumber.from_array(mul(as_coeffs(other), self.coeffs))

    def conj(self) -> "Supernumber":
        return Supernumber.from_array(conj(self.coeffs))

    def isclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, as_coeffs(other), rtol=0.0, atol=atol))

    def __repr__(self):
        terms = []
        for c, name in zip(self.coeffs, ("", "a", "ab", "ab*a")):
            if c != 0:
                terms.append(f"({c:.6g}){name}")
        return "Supernumber(" + (" + ".join(terms) or "0") + ")"


def as_coeffs(x) -> np.ndarray:
    """Coefficient array of a Supernumber, 4-array or plain complex scalar."""
    if isinstance(x, Supernumber):
        return x.coeffs
    arr = np.asarray(x, dtype=complex)
    if arr.shape == ():
        return np.array([arr, 0, 0, 0], dtype=complex)
    return arr


ONE = Supernumber(1)
ALPHA = Supernumber(0, 1)
ALPHA_BAR = Supernumber(0, 0, 1)
TOP = Supernumber(0, 0, 0, 1)  # alpha_bar alpha


def gr_mul(a, b) -> Supernumber:
    return Supernumber.from_array(mul(as_coeffs(a), as_coeffs(b)))


def gr_conj(a) -> Supernumber:
    return Supernumber.from_array(conj(as_coeffs(a)))


def gr_parity(a, atol: float = 0.0) -> Literal["even", "odd", "mixed"]:
    c = as_coeffs(a)
    has_odd = np.any(np.abs(c[1:3]) > atol)
    has_even = np.any(np.abs(c[[0, 3]]) > atol)
    if not has_odd:
        return "even"
    if not has_even:
        return "odd"
    return "mixed"


def berezin(a, order: Literal["dalpha_dalphabar"] = "dalpha_dalphabar"):
    """Berezin integral with int alpha_bar alpha dalpha dalpha_bar = 1.

    Works on a Supernumber (returns complex) or on arrays along the last axis.
    """
    if order != "dalpha_dalphabar":
        raise ValueError(f"unsupported integration order {order!r}")
    if isinstance(a, Supernumber):
        return a.c3
    return np.asarray(a, dtype=complex)[..., 3]
