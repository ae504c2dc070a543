"""Super Hilbert space built from the oscillator and its Darboux partner.

A superstate is stored in the discrete bases: ``even[n]`` is the coefficient of
psi_n, ``odd[n]`` that of theta phi_n (phi_n = L psi_n), and ``ground`` that of
theta phi_{-1} when supersymmetry is exact.  Coefficients are supernumbers in
the algebra of ``grassmann`` (arrays with a trailing axis of length 4) and are
written to the *left* of the basis vectors.  The theta degree is structural and
never stored as a Grassmann number.

Pairing table of the superscalar product on basis vectors:

    <psi_m | psi_n> = delta_mn,   <theta phi_m | theta phi_n> = i delta_mn,

cross terms zero, extended by <b1 v | b2 w> = (-1)^(e(v) e(b2)) conj(b1) b2 <v|w>.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from . import grassmann as gr
from .coherent import check_label, coherent_coefficients_at, monomial_weights
from .darboux import Regime, TransformSpec
from .grassmann import Supernumber
from .oscillator import OscillatorParams
from .quadrature import QuadResult, integrate_disc

__all__ = [
    "Superstate",
    "SupercoherentLabel",
    "GENERATORS",
    "superstate",
    "basis_state",
    "super_inner",
    "apply_generator",
    "superadjoint",
    "generator_parity",
    "supercoherent_state",
    "annihilation_check",
    "super_resolution_matrix",
    "super_resolution_check",
    "superholomorphic_rep",
    "coherent_projection",
    "exp_minus_f",
    "superholo_inner",
    "superhamiltonian_levels",
    "HOLOMORPHIC_PREFACTOR_KAPPA",
]

Generator = Literal["K0", "K+", "K-", "Q+", "Q-", "I", "B0"]
GENERATORS: tuple[str, ...] = ("K0", "K+", "K-", "Q+", "Q-", "I", "B0")

# <Psi_{zbar, alphabar} | Psi> = (1 - |z|^2)^k (1 - kappa alphabar alpha) Psi(z, alpha).
# Obtained by expanding the left side in the Grassmann algebra; see
# tests/test_superspace.py::test_kappa_from_grassmann_expansion.
HOLOMORPHIC_PREFACTOR_KAPPA = 0.5j


@dataclass(frozen=True)
class Superstate:
    even: np.ndarray
    odd: np.ndarray
    k: float
    ground: np.ndarray | None = None
    tail: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.even.shape != self.odd.shape or self.even.shape[-1:] != (4,):
            raise ValueError("even and odd parts must both have shape (N, 4)")

    @property
    def size(self) -> int:
        return self.even.shape[0]

    @property
    def exact(self) -> bool:
        return self.ground is not None

    def scale(self, beta) -> "Superstate":
        """Left multiplication by a supernumber (or complex scalar)."""
        b = gr.as_coeffs(beta)
        g = None if self.ground is None else gr.mul(b, self.ground)
        return replace(self, even=gr.mul(b, self.even), odd=gr.mul(b, self.odd), ground=g)

    def __add__(self, other: "Superstate") -> "Superstate":
        _check_compatible(self, other)
        g = None if self.ground is None else self.ground + other.ground
        return replace(self, even=self.even + other.even, odd=self.odd + other.odd, ground=g,
                       tail=self.tail + other.tail)

    def __sub__(self, other: "Superstate") -> "Superstate":
        return self + other.scale(-1.0)

    def max_abs(self) -> float:
        parts = [np.abs(self.even).max(), np.abs(self.odd).max()]
        if self.ground is not None:
            parts.append(np.abs(self.ground).max())
        return float(max(parts))

    def parity(self) -> int | None:
        """0 or 1 for homogeneous elements of H_s (complex coefficients), else None."""
        body_only = np.all(self.even[:, 1:3] == 0) and np.all(self.odd[:, 1:3] == 0)
        odd_zero = not np.any(self.odd) and (self.ground is None or not np.any(self.ground))
        if not body_only:
            return None
        if odd_zero:
            return 0
        if not np.any(self.even):
            return 1
        return None


def _check_compatible(a: Superstate, b: Superstate):
    if a.size != b.size:
        raise ValueError(f"truncations differ: {a.size} vs {b.size}")
    if a.exact != b.exact:
        raise ValueError("cannot combine exact-SUSY and broken-SUSY superstates")


def _lift(c, size: int) -> np.ndarray:
    c = np.zeros(size, dtype=complex) if c is None else np.asarray(c, dtype=complex)
    if c.shape == (size,):
        out = np.zeros((size, 4), dtype=complex)
        out[:, 0] = c
        return out
    if c.shape == (size, 4):
        return c.copy()
    raise ValueError(f"coefficients must have shape ({size},) or ({size}, 4), got {c.shape}")


def superstate(params: OscillatorParams, spec: TransformSpec, even=None, odd=None, ground=None) -> Superstate:
    """Build a superstate; complex coefficients are lifted to supernumbers."""
    spec.require_valid()
    size = params.basis_dim
    exact = spec.regime is Regime.EXACT
    if ground is not None and not exact:
        raise ValueError("a ground-sector component exists only for exact supersymmetry")
    g = gr.as_coeffs(0 if ground is None else ground).copy() if exact else None
    return Superstate(_lift(even, size), _lift(odd, size), params.k, g)


def basis_state(params: OscillatorParams, spec: TransformSpec, sector: str, n: int = 0) -> Superstate:
    """psi_n (sector 'even'), theta phi_n ('odd') or theta phi_{-1} ('ground')."""
    size = params.basis_dim
    e = np.zeros(size, dtype=complex)
    if sector == "ground":
        return superstate(params, spec, ground=1.0)
    e[n] = 1.0
    if sector == "even":
        return superstate(params, spec, even=e)
    if sector == "odd":
        return superstate(params, spec, odd=e)
    raise ValueError(f"unknown sector {sector!r}")


def _pair_sum(c1, c2, odd: bool) -> np.ndarray:
    """sum_n <c1_n v_n | c2_n v_n> over the last-but-one axis."""
    if odd:
        return 1j * gr.mul(gr.conj(c1), gr.parity_flip(c2)).sum(axis=-2)
    return gr.mul(gr.conj(c1), c2).sum(axis=-2)


def super_inner(s1: Superstate, s2: Superstate) -> Supernumber:
    """Superscalar product <s1|s2>, a supernumber."""
    _check_compatible(s1, s2)
    total = _pair_sum(s1.even, s2.even, False) + _pair_sum(s1.odd, s2.odd, True)
    if s1.exact:
        total = total + _pair_sum(s1.ground[None, :], s2.ground[None, :], True)
    return Supernumber.from_array(total)


def _ladder(c: np.ndarray, k: float, which: str) -> tuple[np.ndarray, float]:
    size = c.shape[0]
    n = np.arange(size)
    step = np.sqrt((n + 1.0) * (n + 2.0 * k))[:, None]
    out = np.zeros_like(c)
    tail = 0.0
    if which == "K+":
        out[1:] = step[:-1] * c[:-1]
        tail = float(np.linalg.norm(step[-1] * c[-1]))
    elif which == "K-":
        out[:-1] = step[:-1] * c[1:]
    elif which == "K0":
        out = (k + n)[:, None] * c
    return out, tail


def apply_generator(g: Generator, s: Superstate) -> Superstate:
    """Act with a superalgebra generator in the discrete basis.

    K operators act with the su(1,1) coefficients on both sectors (L k L+ maps
    phi_n exactly as k maps psi_n).  Q+ = L theta moves psi_n to theta phi_n,
    Q- = L+ d/dtheta moves back; both are odd, so they flip the sign of odd
    coefficient components they pass.  The exact-SUSY ground sector carries
    the trivial representation: every generator, I included, annihilates it.
    """
    zero = np.zeros_like(s.even)
    ground = None if s.ground is None else np.zeros(4, dtype=complex)
    if g in ("K0", "K+", "K-"):
        even, t1 = _ladder(s.even, s.k, g)
        odd, t2 = _ladder(s.odd, s.k, g)
        return Superstate(even, odd, s.k, ground, s.tail + t1 + t2)
    if g == "I":
        return Superstate(s.even.copy(), s.odd.copy(), s.k, ground, s.tail)
    if g == "B0":
        return Superstate(s.even.copy(), -s.odd, s.k, ground, s.tail)
    if g == "Q+":
        return Superstate(zero, gr.parity_flip(s.even), s.k, ground, s.tail)
    if g == "Q-":
        return Superstate(gr.parity_flip(s.odd), zero, s.k, ground, s.tail)
    raise ValueError(f"unknown generator {g!r}")


def generator_parity(g: Generator) -> int:
    return 1 if g in ("Q+", "Q-") else 0


def superadjoint(g: Generator) -> tuple[str, complex]:
    """(h, c) with g^+ = c h."""
    table = {
        "K0": ("K0", 1.0), "K+": ("K-", 1.0), "K-": ("K+", 1.0),
        "I": ("I", 1.0), "B0": ("B0", 1.0),
        "Q+": ("Q-", 1j), "Q-": ("Q+", 1j),
    }
    return table[g]


@dataclass(frozen=True)
class SupercoherentLabel:
    """(z, alpha) with |z| < 1 and alpha = a * (generator alpha)."""

    z: complex
    a: complex = 0j

    def __post_init__(self):
        check_label(self.z)

    @property
    def alpha(self) -> Supernumber:
        return Supernumber(0, self.a)

    @classmethod
    def from_supernumber(cls, z: complex, alpha: Supernumber) -> "SupercoherentLabel":
        if abs(alpha.c0) or abs(alpha.c2) or abs(alpha.c3):
            raise ValueError("supercoherent label must be a multiple of the generator alpha")
        return cls(z, alpha.c1)


def _coherent_parts(params: OscillatorParams, z, alpha: np.ndarray):
    """Even/odd coefficient arrays of N (psi_z - alpha theta phi_z) for arrays of z.

    ``alpha`` is an odd supernumber (4-array).  Shapes: z.shape + (N, 4).
    """
    c = coherent_coefficients_at(params, z)
    norm = gr.as_coeffs(1.0) + 0.5j * gr.mul(gr.conj(alpha), alpha)
    even = c[..., None] * norm
    odd = -c[..., None] * gr.mul(norm, alpha)
    return even, odd


def supercoherent_state(params: OscillatorParams, spec: TransformSpec, label: SupercoherentLabel) -> Superstate:
    """Psi_{z alpha} = N (psi_z - alpha theta phi_z), N = 1 + (i/2) alphabar alpha."""
    spec.require_valid()
    z = check_label(label.z, series=True)
    even, odd = _coherent_parts(params, np.asarray(z), label.alpha.coeffs)
    ground = np.zeros(4, dtype=complex) if spec.regime is Regime.EXACT else None
    return Superstate(even, odd, params.k, ground)


def annihilation_check(params: OscillatorParams, spec: TransformSpec, label: SupercoherentLabel) -> Superstate:
    """Q- Psi_{z alpha} - alpha Psi_{z alpha}; identically zero."""
    s = supercoherent_state(params, spec, label)
    return apply_generator("Q-", s) - s.scale(label.alpha)


def _projector_state_arrays(params: OscillatorParams, z):
    """Coefficients of Psi_{zbar, alphabar} at every node z, alpha the generator."""
    return _coherent_parts(params, np.conj(z), gr.ALPHA_BAR.coeffs)


def super_resolution_matrix(params: OscillatorParams, spec: TransformSpec, size: int, tol: float = 1e-10):
    """Pairings <e_a | (int P_{zbar alphabar} dmu) e_b> over the basis
    (psi_0..psi_{size-1}, theta phi_0..theta phi_{size-1}).

    The supermeasure is i dalpha dalphabar dmu(z): the Grassmann integral is
    done exactly on the algebra, the z integral by disc quadrature.  Returns
    ``(pairing, operator, error)`` where ``operator`` divides out the basis
    Gram matrix (1 on even rows, i on odd rows) and is the identity when the
    resolution holds.
    """
    spec.require_valid()
    if size > params.basis_dim:
        raise ValueError("size exceeds the basis truncation")

    def g(z):
        even, odd = _projector_state_arrays(params, z)
        even, odd = even[:, :size], odd[:, :size]
        # <e_a | Psi>: even a -> coefficient, odd a -> i * P(coefficient)
        left = np.concatenate([even, 1j * gr.parity_flip(odd)], axis=1)
        # <Psi | e_b>: even b -> conj, odd b -> i * conj
        right = np.concatenate([gr.conj(even), 1j * gr.conj(odd)], axis=1)
        # <e_a | beta_b Psi> = (-1)^(e(a) e(beta_b)) beta_b <e_a|Psi>
        signs = np.concatenate([np.zeros(size, bool), np.ones(size, bool)])
        rb = right[:, None, :, :]
        rb = np.where(signs[None, :, None, None], gr.parity_flip(rb), rb)
        prod = gr.mul(rb, left[:, :, None, :])
        return 1j * gr.berezin(prod)

    res = integrate_disc(g, params.k, n_radial=max(20, size + 4), n_angular=max(16, 2 * size + 4), tol=tol)
    pairing = res.value
    gram = np.concatenate([np.ones(size), np.full(size, 1j)])
    return pairing, pairing / gram[:, None], res.error


def super_resolution_check(
    params: OscillatorParams,
    spec: TransformSpec,
    m_even: int,
    n_even: int,
    m_odd: int,
    n_odd: int,
) -> np.ndarray:
    """2x2 pairings [[<psi_m|O psi_n>, <psi_m|O theta phi_n'>],
    [<theta phi_m'|O psi_n>, <theta phi_m'|O theta phi_n'>]] with O the
    supermeasure integral of the coherent projector."""
    size = max(m_even, n_even, m_odd, n_odd) + 1
    pairing, _, _ = super_resolution_matrix(params, spec, size)
    rows = (m_even, size + m_odd)
    cols = (n_even, size + n_odd)
    return pairing[np.ix_(rows, cols)]


def _holo_parts(params: OscillatorParams, s: Superstate, z):
    g = monomial_weights(params.k, s.size)
    z = np.asarray(z, dtype=complex)
    powers = (z[..., None] ** np.arange(s.size)) * g
    psi = np.tensordot(powers, s.even, axes=(-1, 0))
    phi = np.tensordot(powers, s.odd, axes=(-1, 0))
    return psi, phi


def superholomorphic_rep(params: OscillatorParams, spec: TransformSpec, s: Superstate, z, alpha=gr.ALPHA):
    """Psi(z, alpha) = psi(z) - i alpha phi(z) with psi, phi the holomorphic
    representations of the two sectors.  The exact-SUSY ground sector is not
    reached by coherent states and does not enter.

    Returns a Supernumber for scalar z, else an array (..., 4).
    """
    psi, phi = _holo_parts(params, s, z)
    out = psi - 1j * gr.mul(gr.as_coeffs(alpha), phi)
    return Supernumber.from_array(out) if out.ndim == 1 else out


def coherent_projection(params: OscillatorParams, spec: TransformSpec, s: Superstate, z: complex) -> Supernumber:
    """<Psi_{zbar, alphabar} | s> with alpha the generator, as a supernumber."""
    even, odd = _projector_state_arrays(params, np.asarray(z))
    psi_bar = Superstate(even, odd, params.k, None if s.ground is None else np.zeros(4, complex))
    return super_inner(psi_bar, s)


def exp_minus_f(params: OscillatorParams, z) -> np.ndarray:
    """|<Psi_00 | Psi_{zbar, alphabar}>|^2 on the algebra, for an array of z.

    Evaluates to (1 - i alphabar alpha)(1 - |z|^2)^(2k).
    """
    even, _ = _projector_state_arrays(params, z)
    # <psi_0 | .> picks the n = 0 even coefficient
    x = even[..., 0, :]
    return gr.mul(x, gr.conj(x))


def superholo_inner(params: OscillatorParams, spec: TransformSpec, s1: Superstate, s2: Superstate,
                    tol: float = 1e-10) -> QuadResult:
    """int conj(Psi1(z, alpha)) Psi2(z, alpha) e^-f  i dalpha dalphabar dmu(z)."""
    _check_compatible(s1, s2)

    def g(z):
        p1 = superholomorphic_rep(params, spec, s1, z)
        p2 = superholomorphic_rep(params, spec, s2, z)
        prod = gr.mul(gr.mul(gr.conj(p1), p2), exp_minus_f(params, z))
        return 1j * gr.berezin(prod)

    size = s1.size
    return integrate_disc(g, params.k, n_radial=max(20, size + 4), n_angular=max(16, 2 * size + 4), tol=tol)


def superhamiltonian_levels(params: OscillatorParams, spec: TransformSpec, n_levels: int):
    """Spectrum of H = 2 K0 as (energy, degeneracy, carriers) triples.

    Exact SUSY adds a nondegenerate bottom level E = alpha carried by
    theta phi_{-1}; every other level is shared by psi_n and theta phi_n.
    """
    spec.require_valid()
    levels = []
    if spec.regime is Regime.EXACT:
        levels.append((spec.alpha, 1, ("theta phi_-1",)))
    for n in range(n_levels):
        levels.append((2.0 * (params.k + n), 2, (f"psi_{n}", f"theta phi_{n}")))
    return levels
