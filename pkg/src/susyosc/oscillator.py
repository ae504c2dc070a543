"""The singular oscillator h0 = -d^2/dx^2 + x^2/4 + b/x^2 on the half-line."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from . import finite_diff
from .quadrature import QuadResult, integrate_halfline
from .special import laguerre, laguerre_derivative, log_gamma

__all__ = [
    "OscillatorParams",
    "Wavefunction",
    "BasisVector",
    "make_params",
    "params_from_k",
    "energy",
    "default_grid",
    "eigenfunction",
    "make_wavefunction",
    "overlap",
    "ladder_apply",
    "casimir_expectation",
    "coordinate_raise",
    "hamiltonian_residual",
]

log = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OscillatorParams:
    b: float
    k: float
    basis_dim: int = 80
    casimir: float = 0.0

    def __post_init__(self):
        if self.basis_dim < 1:
            raise ValueError("basis_dim must be at least 1")
        if self.k < 0.5:
            raise ValueError(f"Bargmann index must be >= 1/2, got {self.k}")
        if not math.isclose(self.casimir, self.k * (1.0 - self.k), rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(
                f"Casimir {self.casimir} inconsistent with k(1-k) = {self.k * (1 - self.k)}"
            )

    @property
    def ground_energy(self) -> float:
        return 2.0 * self.k


def make_params(b: float, basis_dim: int = 80) -> OscillatorParams:
    """Build parameters from the coupling b (b >= -1/4)."""
    if b < -0.25:
        raise ValueError(f"b = {b} < -1/4 gives a complex Bargmann index")
    k = 0.5 + 0.25 * math.sqrt(1.0 + 4.0 * b)
    return OscillatorParams(b=b, k=k, basis_dim=basis_dim, casimir=3.0 / 16.0 - b / 4.0)


def params_from_k(k: float, basis_dim: int = 80) -> OscillatorParams:
    """Inverse of make_params: b = ((4k - 2)^2 - 1) / 4."""
    if k < 0.5:
        raise ValueError(f"Bargmann index must be >= 1/2, got {k}")
    b = ((4.0 * k - 2.0) ** 2 - 1.0) / 4.0
    return OscillatorParams(b=b, k=k, basis_dim=basis_dim, casimir=3.0 / 16.0 - b / 4.0)


def energy(params: OscillatorParams, n: int) -> float:
    if n < 0:
        raise ValueError("level index must be nonnegative")
    return 2.0 * (params.k + n)


def default_grid(params: OscillatorParams, n_points: int = 2000, x_max: float | None = None) -> np.ndarray:
    """Geometric spacing on (0, 0.5], uniform beyond, up to sqrt(4 E_max) + 10."""
    if x_max is None:
        x_max = math.sqrt(4.0 * energy(params, params.basis_dim)) + 10.0
    n_geo = n_points // 5
    geo = np.geomspace(1e-3, 0.5, n_geo, endpoint=False)
    uni = np.linspace(0.5, x_max, n_points - n_geo)
    return np.concatenate([geo, uni])


@dataclass(frozen=True)
class Wavefunction:
    """A half-line function with analytic value and derivative channels.

    ``exponent`` is the power p in w ~ x^p as x -> 0 and ``decay`` the rate d
    in |w| ~ exp(-d x^2 / 4) at infinity; quadrature uses both.
    ``second_derivative`` is optional and, when present, analytic.
    """

    grid: np.ndarray
    values: np.ndarray
    analytic_value: ArrayFn
    analytic_derivative: ArrayFn
    label: str
    exponent: float
    decay: float = 1.0
    second_derivative: ArrayFn | None = field(default=None, repr=False)

    def __call__(self, x):
        return self.analytic_value(np.asarray(x, dtype=float))

    def derivative(self, x):
        return self.analytic_derivative(np.asarray(x, dtype=float))


def make_wavefunction(grid, value, deriv, label, exponent, decay=1.0, second=None) -> Wavefunction:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing positive reals")
    values = np.asarray(value(grid))
    values.setflags(write=False)
    return Wavefunction(grid, values, value, deriv, label, exponent, decay, second)


def _psi_parts(k: float, n: int):
    lognorm = 0.5 * (log_gamma(n + 1.0) + (1.0 - 2.0 * k) * math.log(2.0) - log_gamma(n + 2.0 * k))
    norm = math.exp(lognorm)
    p = 2.0 * k - 0.5
    a = 2.0 * k - 1.0

    def value(x):
        return norm * x**p * np.exp(-(x**2) / 4.0) * laguerre(n, a, x**2 / 2.0)

    def deriv(x):
        t = x**2 / 2.0
        lag = laguerre(n, a, t)
        dlag = laguerre_derivative(n, a, t)
        return norm * x ** (p - 1.0) * np.exp(-(x**2) / 4.0) * ((p - x**2 / 2.0) * lag + x**2 * dlag)

    return value, deriv


def eigenfunction(params: OscillatorParams, n: int, grid=None) -> Wavefunction:
    """Normalized eigenfunction psi_n with Laguerre-positive sign at x -> 0."""
    if not 0 <= n < params.basis_dim:
        raise ValueError(f"level {n} outside basis of size {params.basis_dim}")
    grid = default_grid(params) if grid is None else grid
    value, deriv = _psi_parts(params.k, n)
    E = energy(params, n)
    b = params.b

    def second(x):
        return (x**2 / 4.0 + b / x**2 - E) * value(x)

    return make_wavefunction(grid, value, deriv, f"psi_{n}", 2.0 * params.k - 0.5, 1.0, second)


def overlap(w1: Wavefunction, w2: Wavefunction, tol: float = 1e-10) -> QuadResult:
    """<w1|w2> on [0, inf) by half-line quadrature."""
    sigma = w1.exponent + w2.exponent
    scale = (w1.decay + w2.decay) / 2.0
    return integrate_halfline(lambda x: np.conj(w1(x)) * w2(x), sigma=sigma, tol=tol, scale=scale)


@dataclass(frozen=True)
class BasisVector:
    """Coefficients <n|state> in the truncated eigenbasis; ``tail`` is norm lost off the top."""

    coefficients: np.ndarray
    tail: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))


def _raise_coeffs(k: float, size: int) -> np.ndarray:
    # sqrt((n+1)(n+2k)) for the step n -> n+1
    n = np.arange(size)
    return np.sqrt((n + 1.0) * (n + 2.0 * k))


def ladder_apply(
    params: OscillatorParams,
    which: Literal["raise", "lower", "k0"],
    v: BasisVector,
) -> BasisVector:
    c = np.asarray(v.coefficients, dtype=complex)
    size = c.size
    step = _raise_coeffs(params.k, size)
    out = np.zeros_like(c)
    tail = v.tail
    if which == "raise":
        out[1:] = step[:-1] * c[:-1]
        tail = math.hypot(tail, abs(step[-1] * c[-1]))
    elif which == "lower":
        out[:-1] = step[:-1] * c[1:]
    elif which == "k0":
        out = (params.k + np.arange(size)) * c
    else:
        raise ValueError(f"unknown ladder operator {which!r}")
    return BasisVector(out, tail)


def casimir_expectation(params: OscillatorParams, n: int) -> float:
    """<n| (k+k- + k-k+)/2 - k0^2 |n> from the coefficient action."""
    e = np.zeros(params.basis_dim, dtype=complex)
    e[n] = 1.0
    v = BasisVector(e)
    kp_km = ladder_apply(params, "raise", ladder_apply(params, "lower", v)).coefficients[n]
    km_kp = ladder_apply(params, "lower", ladder_apply(params, "raise", v)).coefficients[n]
    k0sq = ladder_apply(params, "k0", ladder_apply(params, "k0", v)).coefficients[n]
    return float((0.5 * (kp_km + km_kp) - k0sq).real)


def coordinate_raise(params: OscillatorParams, w: Wavefunction) -> Wavefunction:
    """k+ = ((a+)^2 - b/x^2) / 2 with a+ = -d/dx + x/2, in coordinate space.

    Needs the analytic second-derivative channel of w.  In the Laguerre basis
    phase this gives k+ psi_n = -sqrt((n+1)(n+2k)) psi_{n+1}: the coefficient
    action in ``ladder_apply`` is the same operator with k+ -> -k+, k- -> -k-,
    an automorphism of su(1,1) that the coherent-state expansion is built on.
    """
    if w.second_derivative is None:
        raise ValueError("coordinate k+ needs an analytic second derivative")
    b = params.b

    def value(x):
        f, df, d2f = w(x), w.derivative(x), w.second_derivative(x)
        return 0.5 * (d2f - x * df + (x**2 / 4.0 - 0.5) * f - b / x**2 * f)

    def deriv(x):
        return finite_diff.first_derivative(value, x)

    return make_wavefunction(w.grid, value, deriv, f"kplus({w.label})", w.exponent, w.decay)


def hamiltonian_residual(
    params: OscillatorParams,
    w: Wavefunction,
    E: float,
    extra_potential: ArrayFn | None = None,
    x_floor: float = 0.05,
) -> float:
    """max |-w'' + (x^2/4 + b/x^2 + extra) w - E w| / max |w| on the interior grid.

    w'' comes from 6th-order central differences of ``w.analytic_value``.  The
    window is [x_3, x_{N-3}], narrowed from below to ``x_floor`` where the
    b/x^2 term would otherwise dominate round-off.
    """
    grid = w.grid
    lo, hi = 3, grid.size - 3
    x = grid[lo:hi]
    if x[0] < x_floor:
        log.info("residual window narrowed from x=%.3g to x=%.3g", x[0], x_floor)
        x = x[x >= x_floor]
    f = w(x)
    d2 = finite_diff.second_derivative(w.analytic_value, x)
    V = x**2 / 4.0 + params.b / x**2
    if extra_potential is not None:
        V = V + extra_potential(x)
    r = -d2 + (V - E) * f
    scale = float(np.max(np.abs(w.values)))
    return float(np.max(np.abs(r)) / scale)
