"""Darboux partners of the singular oscillator.

Two families of nodeless transformation functions are supported, both built
from Laguerre polynomials at the negative argument y = -x^2/2:

* ``U``: u_p = x^(3/2-2k) e^(x^2/4) L_p^(1-2k)(y), factorization energy 2(k-p-1).
  Even p with 2k-p-1 > 0 gives exact supersymmetry (u_p^-1 is normalizable).
* ``V``: v_p = x^(2k-1/2) e^(x^2/4) L_p^(2k-1)(y), factorization energy -2(k+p).
  Always broken supersymmetry.

The partner potential difference is A = -2 (ln u)''.  Written out,

    A = -1 + 2c/x^2 + 2 x^2 (M/L)^2 - 2 (x^2 R + M) / L

with c the small-x exponent of u, L = L_p^a(y), M = L_{p-1}^(a+1)(y) and
R = L_{p-2}^(a+2)(y).  For the V family this puts superscript 2k+1 on the
L_{p-2} term; the variant with 2k-1 there does not satisfy A = -2(ln v)''.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .oscillator import (
    OscillatorParams,
    Wavefunction,
    default_grid,
    eigenfunction,
    energy,
    hamiltonian_residual,
    make_wavefunction,
    overlap,
    params_from_k,
)
from . import finite_diff
from .quadrature import QuadResult, integrate_halfline
from .special import laguerre

__all__ = [
    "Regime",
    "InvalidTransformError",
    "TransformSpec",
    "make_transform",
    "classify_susy",
    "transformation_function",
    "log_transformation_function",
    "superpotential",
    "potential_difference",
    "potential_difference_fd",
    "transformation_nodes",
    "apply_L_tilde",
    "apply_L_tilde_adjoint",
    "transform_state",
    "partner_ground_state",
    "normalization_integral",
    "normalization_closed_form",
    "intertwining_residual",
    "factorization_matrix",
    "partner_oscillator_params",
]


class Regime(str, enum.Enum):
    EXACT = "ExactSUSY"
    BROKEN = "BrokenSUSY"
    INVALID = "Invalid"


class InvalidTransformError(ValueError):
    """A state-level operation was requested for a transformation with poles."""


@dataclass(frozen=True)
class TransformSpec:
    family: str
    p: int
    params: OscillatorParams
    alpha: float
    regime: Regime

    @property
    def k(self) -> float:
        return self.params.k

    @property
    def small_x_exponent(self) -> float:
        """c in u ~ x^c as x -> 0."""
        return 1.5 - 2 * self.k if self.family == "U" else 2 * self.k - 0.5

    @property
    def laguerre_index(self) -> float:
        return 1.0 - 2 * self.k if self.family == "U" else 2 * self.k - 1.0

    @property
    def state_exponent(self) -> float:
        """Small-x power of the transformed eigenstates."""
        return 2 * self.k - 1.5 if self.family == "U" else 2 * self.k + 0.5

    def require_valid(self):
        if self.regime is Regime.INVALID:
            raise InvalidTransformError(
                f"{self.family}-family p={self.p}, k={self.k}: the potential difference has "
                "poles on the half-line"
            )


def classify_susy(spec_or_family, p: int | None = None, params: OscillatorParams | None = None) -> Regime:
    """SUSY regime of a transformation.

    U family: exact for even p with 2k-p-1 > 0, otherwise invalid.  V family:
    broken.  The exact case also needs u^-1 ~ x^(2k-3/2) square integrable at
    0 (4k-3 > -1); the broken case needs v^-1 ~ x^(1/2-2k) not to be (k > 1/2).
    """
    if isinstance(spec_or_family, TransformSpec):
        family, p, params = spec_or_family.family, spec_or_family.p, spec_or_family.params
    else:
        family = spec_or_family
    k = params.k
    if family == "U":
        if p % 2 == 1 or not 2 * k - p - 1 > 0:
            return Regime.INVALID
        return Regime.EXACT if 4 * k - 3 > -1 else Regime.INVALID
    if family == "V":
        return Regime.BROKEN if 1 - 4 * k <= -1 else Regime.INVALID
    raise ValueError(f"unknown transformation family {family!r}")


def make_transform(params: OscillatorParams, family: str, p: int) -> TransformSpec:
    family = family.upper()
    if family not in ("U", "V"):
        raise ValueError(f"family must be U or V, got {family!r}")
    if p < 0:
        raise ValueError("transformation index p must be nonnegative")
    k = params.k
    alpha = 2.0 * (k - p - 1) if family == "U" else -2.0 * (k + p)
    assert alpha < 2 * k
    return TransformSpec(family, p, params, alpha, classify_susy(family, p, params))


def _lag(n: int, a: float, y):
    if n < 0:
        return np.zeros_like(np.asarray(y, dtype=float))
    return laguerre(n, a, y)


def _laguerre_triplet(spec: TransformSpec, x):
    y = -(x**2) / 2.0
    a, p = spec.laguerre_index, spec.p
    return _lag(p, a, y), _lag(p - 1, a + 1, y), _lag(p - 2, a + 2, y)


def transformation_function(spec: TransformSpec, x):
    """(u(x), u'(x)) for the chosen family."""
    x = np.asarray(x, dtype=float)
    L, _, _ = _laguerre_triplet(spec, x)
    u = x**spec.small_x_exponent * np.exp(x**2 / 4.0) * L
    return u, u * superpotential(spec, x)


def log_transformation_function(spec: TransformSpec, x):
    """ln|u(x)| evaluated without forming e^(x^2/4)."""
    x = np.asarray(x, dtype=float)
    L, _, _ = _laguerre_triplet(spec, x)
    return spec.small_x_exponent * np.log(x) + x**2 / 4.0 + np.log(np.abs(L))


def superpotential(spec: TransformSpec, x):
    """u'/u = c/x + x/2 + x M/L."""
    x = np.asarray(x, dtype=float)
    L, M, _ = _laguerre_triplet(spec, x)
    return spec.small_x_exponent / x + x / 2.0 + x * M / L


def potential_difference(spec: TransformSpec, x, allow_invalid: bool = False):
    """Closed form of A = -2 (ln u)''.

    ``allow_invalid`` lets odd-p U transformations be sampled (for plotting
    their poles); by default they are rejected.
    """
    if not allow_invalid:
        spec.require_valid()
    x = np.asarray(x, dtype=float)
    L, M, R = _laguerre_triplet(spec, x)
    c = spec.small_x_exponent
    return -1.0 + 2.0 * c / x**2 + 2.0 * x**2 * (M / L) ** 2 - 2.0 * (x**2 * R + M) / L


def potential_difference_fd(spec: TransformSpec, x):
    """-2 (ln|u|)'' by sixth-order central differences (verification oracle)."""
    return -2.0 * finite_diff.second_derivative(lambda t: log_transformation_function(spec, t), x)


def transformation_nodes(spec: TransformSpec) -> np.ndarray:
    """Positive zeros of u (poles of A), from the roots of L_p^a(-x^2/2)."""
    if spec.p == 0:
        return np.empty(0)
    a, p = spec.laguerre_index, spec.p
    # coefficients of L_p^a(y) in y, highest first
    coeffs = []
    for m in range(p, -1, -1):
        sign, logc = _signed_log_binom(p + a, p - m)
        coeffs.append((-1) ** m * sign * math.exp(logc - math.lgamma(m + 1)))
    roots = np.roots(coeffs)
    y = roots[np.abs(roots.imag) < 1e-10].real
    y = y[y < 0]
    return np.sort(np.sqrt(-2.0 * y))


def _signed_log_binom(top: float, j: int):
    """(sign, log|.|) of the generalized binomial C(top, j) = prod_{i<j} (top-i) / j!."""
    sign, logv = 1.0, -math.lgamma(j + 1)
    for i in range(j):
        f = top - i
        if f == 0:
            return 0.0, 0.0
        sign *= math.copysign(1.0, f)
        logv += math.log(abs(f))
    return sign, logv


def apply_L_tilde(spec: TransformSpec, w: Wavefunction) -> Wavefunction:
    """(L~ w)(x) = -(u'/u) w + w'.

    The derivative channel uses (L~w)' = (A/2) w - (u'/u) w' + w''; w'' comes
    from w's analytic channel when present, else from finite differences (the
    label records this).
    """
    spec.require_valid()
    W = lambda x: superpotential(spec, x)  # noqa: E731
    A = lambda x: potential_difference(spec, x)  # noqa: E731

    def value(x):
        return -W(x) * w(x) + w.derivative(x)

    if w.second_derivative is not None:
        d2 = w.second_derivative
        label = f"Lt({w.label})"
    else:
        d2 = lambda x: finite_diff.first_derivative(w.analytic_derivative, x)  # noqa: E731
        label = f"Lt({w.label})[fd]"

    def deriv(x):
        return 0.5 * A(x) * w(x) - W(x) * w.derivative(x) + d2(x)

    return make_wavefunction(w.grid, value, deriv, label, w.exponent - 1.0, w.decay)


def apply_L_tilde_adjoint(spec: TransformSpec, w: Wavefunction) -> Wavefunction:
    """(L~+ w)(x) = -(u'/u) w - w', the formal adjoint under (d/dx)+ = -d/dx."""
    spec.require_valid()
    W = lambda x: superpotential(spec, x)  # noqa: E731
    A = lambda x: potential_difference(spec, x)  # noqa: E731

    def value(x):
        return -W(x) * w(x) - w.derivative(x)

    if w.second_derivative is None:
        raise ValueError("L~+ derivative channel needs an analytic second derivative")

    def deriv(x):
        return 0.5 * A(x) * w(x) - W(x) * w.derivative(x) - w.second_derivative(x)

    return make_wavefunction(w.grid, value, deriv, f"Ltplus({w.label})", w.exponent - 1.0, w.decay)


def _partner_second(spec: TransformSpec, f, E):
    b = spec.params.b

    def second(x):
        return (x**2 / 4.0 + b / x**2 + potential_difference(spec, x) - E) * f(x)

    return second


def transform_state(spec: TransformSpec, n: int, grid=None) -> Wavefunction:
    """phi_n = (E_n - alpha)^(-1/2) L~ psi_n, a unit-norm eigenstate of h1 at E_n."""
    spec.require_valid()
    params = spec.params
    grid = default_grid(params) if grid is None else grid
    psi = eigenfunction(params, n, grid=grid)
    E = energy(params, n)
    gap = E - spec.alpha
    if not gap > 0:
        raise ValueError(f"E_{n} - alpha = {gap} must be positive")
    raw = apply_L_tilde(spec, psi)
    s = gap**-0.5

    def value(x):
        return s * raw(x)

    def deriv(x):
        return s * raw.derivative(x)

    return make_wavefunction(
        grid, value, deriv, f"phi_{n}", spec.state_exponent, 1.0, _partner_second(spec, value, E)
    )


def normalization_closed_form(spec: TransformSpec) -> float:
    """(-1)^p 2^(2k-2) p! Gamma(2k-p-1)."""
    k, p = spec.k, spec.p
    g = 2 * k - p - 1
    if not g > 0:
        raise InvalidTransformError("normalization closed form needs 2k-p-1 > 0")
    return (-1) ** p * math.exp((2 * k - 2) * math.log(2.0) + math.lgamma(p + 1) + math.lgamma(g))


def normalization_integral(spec: TransformSpec, tol: float = 1e-12) -> QuadResult:
    """int_0^inf u_p^-2 dx by quadrature (U family only)."""
    if spec.family != "U":
        raise InvalidTransformError("u^-1 is not square integrable for the V family")
    spec.require_valid()
    return integrate_halfline(
        lambda x: np.exp(-2.0 * log_transformation_function(spec, x)),
        sigma=-2.0 * spec.small_x_exponent,
        tol=tol,
    )


def partner_ground_state(spec: TransformSpec, grid=None) -> Wavefunction:
    """phi_{-1} = 2^(1-k) / sqrt(p! Gamma(2k-p-1)) / u_p, the exact-SUSY ground state of h1.

    The constant is (int u_p^-2 dx)^(-1/2); the reciprocal constant
    2^(k-1) sqrt(p! Gamma(2k-p-1)) would give norm (int u_p^-2 dx)^2 instead of 1.
    """
    if spec.regime is not Regime.EXACT:
        raise InvalidTransformError(f"no normalizable zero mode in regime {spec.regime.value}")
    k, p = spec.k, spec.p
    c = math.exp((1 - k) * math.log(2.0) - 0.5 * (math.lgamma(p + 1) + math.lgamma(2 * k - p - 1)))
    grid = default_grid(spec.params) if grid is None else grid

    def value(x):
        return c * np.exp(-log_transformation_function(spec, x))

    def deriv(x):
        return -superpotential(spec, x) * value(x)

    return make_wavefunction(
        grid, value, deriv, "phi_-1", -spec.small_x_exponent, 1.0,
        _partner_second(spec, value, spec.alpha),
    )


def intertwining_residual(spec: TransformSpec, n: int) -> float:
    """Residual of h1 (L~ psi_n) - E_n (L~ psi_n), relative to sup |L~ psi_n|."""
    spec.require_valid()
    phi = apply_L_tilde(spec, eigenfunction(spec.params, n))
    return hamiltonian_residual(
        spec.params, phi, energy(spec.params, n), extra_potential=lambda x: potential_difference(spec, x)
    )


def factorization_matrix(spec: TransformSpec, size: int, tol: float = 1e-12) -> np.ndarray:
    """[<psi_m | L~+ L~ psi_n>] = [<L~ psi_m | L~ psi_n>] for m, n < size."""
    spec.require_valid()
    states = [apply_L_tilde(spec, eigenfunction(spec.params, n)) for n in range(size)]
    out = np.empty((size, size))
    for m in range(size):
        for n in range(m, size):
            out[m, n] = out[n, m] = overlap(states[m], states[n], tol=tol).value
    return out


def partner_oscillator_params(spec: TransformSpec) -> OscillatorParams:
    """For U, p = 0: h1 = h0(k -> k - 1/2) - 1; the shifted oscillator's parameters."""
    if spec.family != "U" or spec.p != 0:
        raise ValueError("closed-form partner identification holds for U-family p = 0 only")
    if spec.k < 1.0:
        raise ValueError("k - 1/2 must be >= 1/2 for the shifted oscillator")
    return params_from_k(spec.k - 0.5, spec.params.basis_dim + 1)
