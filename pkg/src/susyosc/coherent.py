"""SU(1,1) Perelomov coherent states of the singular oscillator."""

from __future__ import annotations

import math

import numpy as np

from .oscillator import (
    BasisVector,
    OscillatorParams,
    Wavefunction,
    default_grid,
    eigenfunction,
    ladder_apply,
    make_wavefunction,
)
from .quadrature import QuadResult, integrate_disc
from .special import log_gamma

__all__ = [
    "SERIES_MAX_MODULUS",
    "check_label",
    "monomial_weights",
    "coherent_coefficients",
    "coherent_coefficients_at",
    "coherent_wavefunction",
    "coherent_series_wavefunction",
    "coherent_overlap",
    "resolution_check",
    "resolution_matrix",
    "holomorphic_rep",
    "holomorphic_inner",
    "eigen_relation_residual",
]

# Series-path operations refuse labels outside this radius; the tail |z|^N n^(k-1/2)
# is no longer negligible at N_max = 80.
SERIES_MAX_MODULUS = 0.9


def check_label(z: complex, series: bool = False) -> complex:
    z = complex(z)
    if not abs(z) < 1.0:
        raise ValueError(f"coherent label must satisfy |z| < 1, got {z}")
    if series and abs(z) > SERIES_MAX_MODULUS:
        raise ValueError(f"|z| = {abs(z):.3f} > {SERIES_MAX_MODULUS}: basis series not reliable")
    return z


def monomial_weights(k: float, size: int) -> np.ndarray:
    """gamma_n = sqrt(Gamma(2k+n) / (n! Gamma(2k))), assembled in log space."""
    n = np.arange(size)
    logs = [0.5 * (log_gamma(2 * k + m) - log_gamma(m + 1.0) - log_gamma(2 * k)) for m in n]
    return np.exp(np.array(logs))


def coherent_coefficients_at(params: OscillatorParams, z, size: int | None = None) -> np.ndarray:
    """<n|z> for an array of labels; shape z.shape + (size,)."""
    size = params.basis_dim if size is None else size
    z = np.asarray(z, dtype=complex)
    g = monomial_weights(params.k, size)
    pref = (1.0 - np.abs(z) ** 2) ** params.k
    powers = z[..., None] ** np.arange(size)
    return pref[..., None] * g * powers


def coherent_coefficients(params: OscillatorParams, z: complex) -> BasisVector:
    """Truncated basis coefficients of |z>; ``tail`` is the missing norm."""
    z = check_label(z, series=True)
    c = coherent_coefficients_at(params, z)
    tail2 = max(0.0, 1.0 - float(np.sum(np.abs(c) ** 2)))
    return BasisVector(c, math.sqrt(tail2))


def coherent_wavefunction(params: OscillatorParams, z: complex, grid=None) -> Wavefunction:
    """Closed coordinate form of <x|z> (principal branch of (1-z)^-2k)."""
    z = check_label(z)
    k = params.k
    grid = default_grid(params) if grid is None else grid
    pref = (
        2.0 ** (0.5 - k)
        * math.exp(-0.5 * log_gamma(2 * k))
        * (1.0 - z) ** (-2.0 * k)
        * (1.0 - abs(z) ** 2) ** k
    )
    q = (1.0 + z) / (4.0 * (1.0 - z))
    p = 2.0 * k - 0.5

    def value(x):
        return pref * x**p * np.exp(-q * x**2)

    def deriv(x):
        return pref * x ** (p - 1.0) * np.exp(-q * x**2) * (p - 2.0 * q * x**2)

    def second(x):
        return pref * x ** (p - 2.0) * np.exp(-q * x**2) * (
            p * (p - 1.0) - 2.0 * q * (2.0 * p + 1.0) * x**2 + 4.0 * q**2 * x**4
        )

    decay = 4.0 * q.real
    return make_wavefunction(grid, value, deriv, "psi_z", p, decay, second)


def coherent_series_wavefunction(params: OscillatorParams, z: complex, grid=None) -> Wavefunction:
    """sum_n <n|z> psi_n(x) over the truncated basis."""
    coeffs = coherent_coefficients(params, z).coefficients
    grid = default_grid(params) if grid is None else grid
    states = [eigenfunction(params, n, grid=grid[:1]) for n in range(params.basis_dim)]

    def value(x):
        return sum(c * s(x) for c, s in zip(coeffs, states))

    def deriv(x):
        return sum(c * s.derivative(x) for c, s in zip(coeffs, states))

    zc = complex(z)
    decay = ((1.0 - abs(zc) ** 2) / abs(1.0 - zc) ** 2)
    return make_wavefunction(grid, value, deriv, "psi_z_series", 2.0 * params.k - 0.5, decay)


def coherent_overlap(params: OscillatorParams, z1: complex, z2: complex) -> complex:
    z1, z2 = check_label(z1), check_label(z2)
    k = params.k
    return complex(
        (1 - abs(z1) ** 2) ** k * (1 - abs(z2) ** 2) ** k * (1 - z1.conjugate() * z2) ** (-2 * k)
    )


def _require_measure(params: OscillatorParams):
    if not params.k > 0.5:
        raise ValueError(f"measure (2k-1)/pi degenerates for k = {params.k} <= 1/2")


def resolution_matrix(params: OscillatorParams, size: int, tol: float = 1e-10) -> QuadResult:
    """Matrix of int <m|z><z|n> dmu(z) for m, n < size."""
    _require_measure(params)

    def g(z):
        c = coherent_coefficients_at(params, z, size)
        return c[:, :, None] * np.conj(c)[:, None, :]

    return integrate_disc(g, params.k, n_radial=max(20, size + 4), n_angular=max(16, 2 * size + 4), tol=tol)


def resolution_check(params: OscillatorParams, m: int, n: int, tol: float = 1e-10) -> complex:
    """int <m|z><z|n> dmu(z); equals delta_mn when the measure resolves unity."""
    res = resolution_matrix(params, max(m, n) + 1, tol)
    return complex(res.value[m, n])


def holomorphic_rep(params: OscillatorParams, coeffs, z) -> np.ndarray:
    """psi(z) = sum_n C_n gamma_n z^n, the function with <zbar|psi> = (1-|z|^2)^k psi(z)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    g = monomial_weights(params.k, coeffs.size)
    z = np.asarray(z, dtype=complex)
    return (z[..., None] ** np.arange(coeffs.size)) @ (g * coeffs)


def holomorphic_inner(params: OscillatorParams, f1_coeffs, f2_coeffs, tol: float = 1e-10) -> complex:
    """int (1-|z|^2)^2k conj(psi1(z)) psi2(z) dmu(z) over the unit disc."""
    _require_measure(params)
    f1 = np.asarray(getattr(f1_coeffs, "coefficients", f1_coeffs), dtype=complex)
    f2 = np.asarray(getattr(f2_coeffs, "coefficients", f2_coeffs), dtype=complex)
    if f1.size != f2.size:
        raise ValueError("coefficient vectors must share a truncation")
    k = params.k

    def g(z):
        w = (1.0 - np.abs(z) ** 2) ** (2 * k)
        return w * np.conj(holomorphic_rep(params, f1, z)) * holomorphic_rep(params, f2, z)

    size = f1.size
    res = integrate_disc(g, k, n_radial=max(20, size + 4), n_angular=max(16, 2 * size + 4), tol=tol)
    return complex(res.value)


def eigen_relation_residual(params: OscillatorParams, z: complex) -> float:
    """max |(k- - 2kz - z^2 k+)|z>| over the truncated coefficients, top index excluded."""
    v = coherent_coefficients(params, z)
    lower = ladder_apply(params, "lower", v).coefficients
    raise_ = ladder_apply(params, "raise", v).coefficients
    r = lower - 2 * params.k * z * v.coefficients - z**2 * raise_
    return float(np.max(np.abs(r[:-1])))
