"""Quadrature on the half-line and on the unit disc.

Half-line integrands are assumed to look like x^sigma * exp(-s x^2 / 2) * g(x)
with g smooth.  The substitution t = s x^2 / 2 turns them into generalized
Gauss-Laguerre integrals with parameter (sigma - 1) / 2, which are exact when
g(sqrt(2 t / s)) is a polynomial in t.  This covers every product of
eigenfunctions of the singular oscillator.

Disc integrands are assumed to carry the boundary factor (1 - |z|^2)^(2k)
that coherent-state matrix elements produce.  With s = |z|^2 the measure
(2k-1)/pi (1-|z|^2)^-2 dA becomes a Gauss-Jacobi weight (1-s)^(2k-2) on [0, 1],
so the rule reaches the boundary and there is no truncated annulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import roots_genlaguerre, roots_jacobi

__all__ = [
    "QuadratureError",
    "QuadResult",
    "HalfLineRule",
    "DiscRule",
    "halfline_rule",
    "disc_rule",
    "integrate_halfline",
    "integrate_disc",
    "MAX_HALFLINE_NODES",
]

# Beyond ~150 nodes scipy's Laguerre weights underflow to zero.
MAX_HALFLINE_NODES = 150


class QuadratureError(RuntimeError):
    """Raised when a rule fails to reach the requested tolerance."""

    def __init__(self, message: str, value, error: float):
        super().__init__(f"{message} (achieved error estimate {error:.3e})")
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: complex | float | np.ndarray
    error: float
    nodes: int


@dataclass(frozen=True)
class HalfLineRule:
    """Nodes and weights such that sum(w * f(x)) approximates int_0^inf f dx."""

    nodes: np.ndarray
    weights: np.ndarray
    sigma: float
    scale: float

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])

    def __call__(self, values) -> np.ndarray:
        """Apply the rule to samples whose *last* axis runs over the nodes."""
        return np.asarray(values) @ self.weights


@lru_cache(maxsize=128)
def _halfline_cached(n: int, sigma: float, scale: float) -> HalfLineRule:
    a = (sigma - 1.0) / 2.0
    t, w = roots_genlaguerre(n, a)
    keep = w > 0
    t, w = t[keep], w[keep]
    # W = w e^t t^-a / sqrt(2 s t), assembled in log space.
    logw = np.log(w) + t - a * np.log(t) - 0.5 * np.log(2.0 * scale * t)
    x = np.sqrt(2.0 * t / scale)
    nodes = np.ascontiguousarray(x)
    weights = np.ascontiguousarray(np.exp(logw))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return HalfLineRule(nodes, weights, sigma, scale)


def halfline_rule(n: int, sigma: float, scale: float = 1.0) -> HalfLineRule:
    """Generalized Gauss-Laguerre rule for x^sigma exp(-scale x^2/2) integrands."""
    if sigma <= -1.0:
        raise ValueError(f"endpoint exponent sigma must exceed -1, got {sigma}")
    if scale <= 0.0:
        raise ValueError("Gaussian scale must be positive")
    if not 1 <= n <= MAX_HALFLINE_NODES:
        raise ValueError(f"node count must be in [1, {MAX_HALFLINE_NODES}]")
    return _halfline_cached(int(n), float(sigma), float(scale))


def integrate_halfline(
    f,
    sigma: float = 0.0,
    tol: float = 1e-10,
    scale: float = 1.0,
    n_start: int = 40,
) -> QuadResult:
    """Integrate f over [0, inf) with error control by node refinement.

    ``f`` must accept an array of abscissae.  The Gauss-Laguerre rule grows by
    1.5x until two successive estimates agree to ``tol`` (absolute, or relative
    to the value when it exceeds one).  Integrands with complex singularities
    close to the positive axis defeat that rule; for those, adaptive QUADPACK
    integration with an x^sigma endpoint weight takes over.  Raises
    QuadratureError if neither route reaches the tolerance.
    """
    n = n_start
    rule = halfline_rule(n, sigma, scale)
    prev = rule(f(rule.nodes))
    while True:
        n_next = min(int(math.ceil(n * 1.5)), MAX_HALFLINE_NODES)
        rule = halfline_rule(n_next, sigma, scale)
        cur = rule(f(rule.nodes))
        err = float(np.max(np.abs(np.asarray(cur) - np.asarray(prev))))
        if err <= tol * max(1.0, float(np.max(np.abs(cur)))):
            return QuadResult(cur, err, n_next)
        if n_next == MAX_HALFLINE_NODES:
            break
        n, prev = n_next, cur
    if np.ndim(cur) != 0:
        raise QuadratureError("half-line quadrature did not converge", cur, err)
    return _adaptive_halfline(f, sigma, tol, scale)


def _smooth_part(f, comp, x: float, sigma: float) -> float:
    # QAWS may sample the endpoint itself; take the limit from just inside.
    x = max(x, 1e-12)
    return comp(f(np.array([x]))[0]) / x**sigma


def _adaptive_halfline(f, sigma: float, tol: float, scale: float) -> QuadResult:
    x_c = 1.0 / math.sqrt(scale)
    # Gaussian tail below 1e-300 of the integrand scale
    x_max = math.sqrt(2.0 * 700.0 / scale)
    parts, errs, evals = [], [], 0
    is_complex = np.iscomplexobj(f(np.array([x_c])))
    comps = (np.real, np.imag) if is_complex else (np.real,)
    for comp in comps:
        head = integrate.quad(
            lambda x: _smooth_part(f, comp, x, sigma), 0.0, x_c,
            weight="alg", wvar=(sigma, 0.0), epsabs=tol / 4, epsrel=tol / 4,
            limit=500, full_output=1,
        )
        tail = integrate.quad(
            lambda x: comp(f(np.array([x]))[0]), x_c, x_max,
            epsabs=tol / 4, epsrel=tol / 4, limit=500, full_output=1,
        )
        parts.append(head[0] + tail[0])
        errs.append(head[1] + tail[1])
        evals += head[2]["neval"] + tail[2]["neval"]
    value = parts[0] + 1j * parts[1] if is_complex else parts[0]
    err = float(sum(errs))
    if err > tol * max(1.0, abs(value)):
        raise QuadratureError("adaptive half-line quadrature did not converge", value, err)
    return QuadResult(value, err, evals)


@dataclass(frozen=True)
class DiscRule:
    """Product rule on the unit disc for the measure (2k-1)/pi (1-|z|^2)^-2 dA.

    ``radii`` are the radial nodes (largest is ``r_max``), ``weights`` already
    include the (2k-1)/pi normalization, the Jacobian and the removal of the
    (1 - |z|^2)^(2k) boundary factor, so that sum(w * g(z)) approximates the
    measure integral of g.
    """

    radii: np.ndarray
    n_angular: int
    k: float
    z: np.ndarray
    weights: np.ndarray

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    def __call__(self, values) -> np.ndarray:
        """Apply the rule to samples whose *first* axis runs over ``self.z``."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


@lru_cache(maxsize=64)
def _disc_cached(n_radial: int, n_angular: int, k: float) -> DiscRule:
    xj, wj = roots_jacobi(n_radial, 2.0 * k - 2.0, 0.0)
    s = (xj + 1.0) / 2.0
    # int_0^1 (1-s)^(2k-2) h(s) ds = 2^(1-2k) sum wj h(s_j)
    ws = wj * 2.0 ** (1.0 - 2.0 * k)
    phi = 2.0 * np.pi * np.arange(n_angular) / n_angular
    r = np.sqrt(s)
    z = (r[:, None] * np.exp(1j * phi[None, :])).ravel()
    # (2k-1)/pi * (1/2) ds dphi, boundary factor divided out
    radial = (2.0 * k - 1.0) / np.pi * 0.5 * ws / (1.0 - s) ** (2.0 * k)
    w = (radial[:, None] * np.full(n_angular, 2.0 * np.pi / n_angular)[None, :]).ravel()
    for arr in (r, z, w):
        arr.setflags(write=False)
    return DiscRule(r, n_angular, k, z, w)


def disc_rule(k: float, n_radial: int = 40, n_angular: int = 64) -> DiscRule:
    if not k > 0.5:
        raise ValueError(f"disc measure needs k > 1/2 (2k-1 > 0), got k={k}")
    return _disc_cached(int(n_radial), int(n_angular), float(k))


def integrate_disc(
    g,
    k: float,
    n_radial: int = 40,
    n_angular: int = 64,
    tol: float = 1e-10,
) -> QuadResult:
    """Integrate g over |z| < 1 against (2k-1)/pi (1-|z|^2)^-2 dA.

    ``g`` receives a flat complex array of nodes and returns an array whose
    first axis matches it.  g is expected to vanish like (1-|z|^2)^(2k) at the
    boundary.  The error estimate compares against a rule with twice the
    radial and angular nodes.
    """
    coarse = disc_rule(k, n_radial, n_angular)
    fine = disc_rule(k, 2 * n_radial, 2 * n_angular)
    a = coarse(g(coarse.z))
    b = fine(g(fine.z))
    err = float(np.max(np.abs(np.asarray(b) - np.asarray(a))))
    if err > tol * max(1.0, float(np.max(np.abs(b)))):
        raise QuadratureError("disc quadrature did not converge", b, err)
    return QuadResult(b, err, fine.z.size)
