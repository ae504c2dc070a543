"""Invariant suites: each check reports achieved error against a target.

A suite is a list of zero-argument callables producing ``CheckResult``; the
CLI and the acceptance tests both run them through ``run_suite``.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import coherent as coh
from . import darboux as dx
from . import grassmann as gr
from . import superspace as ss
from .oscillator import (
    OscillatorParams,
    default_grid,
    eigenfunction,
    energy,
    hamiltonian_residual,
    make_params,
    overlap,
    params_from_k,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "SUITES",
    "CheckResult",
    "VerifyConfig",
    "run_suite",
]

DEFAULT_TOLERANCES: dict[str, float] = {
    "gram": 1e-8,
    "residual": 1e-5,
    "duality": 1e-8,
    "resolution": 1e-6,
    "norm_law": 1e-8,
    "potential": 1e-6,
    "normalization": 1e-8,
    "partner": 1e-8,
    "grassmann": 1e-14,
    "algebra": 1e-10,
    "supercoherent": 1e-10,
    "super_resolution": 1e-6,
    "superholo": 1e-6,
}

SUITES = ("oscillator", "coherent", "darboux", "grassmann", "superspace")


@dataclass(frozen=True)
class VerifyConfig:
    k: float = 1.25
    b: float | None = None
    family: str = "U"
    p: int = 0
    nmax: int = 10
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0

    def params(self, basis_dim: int = 80) -> OscillatorParams:
        if self.b is not None:
            return make_params(self.b, basis_dim)
        return params_from_k(self.k, basis_dim)

    def spec(self, basis_dim: int = 80) -> dx.TransformSpec:
        return dx.make_transform(self.params(basis_dim), self.family, self.p)

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    anchor: str
    achieved: float
    target: float
    passed: bool
    seconds: float
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


Check = Callable[[VerifyConfig], tuple[float, str]]

# name -> (suite, anchor, tolerance key, check)
_REGISTRY: dict[str, tuple[str, str, str, Check]] = {}


def _check(suite: str, name: str, anchor: str, tol_key: str):
    def wrap(fn: Check) -> Check:
        _REGISTRY[name] = (suite, anchor, tol_key, fn)
        return fn

    return wrap


def run_suite(suite: str, cfg: VerifyConfig | None = None) -> list[CheckResult]:
    """Run one suite (or 'all'); checks that do not apply to the config are skipped."""
    cfg = VerifyConfig() if cfg is None else cfg
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    out = []
    for name, (s, anchor, key, fn) in _REGISTRY.items():
        if suite not in ("all", s):
            continue
        t0 = time.perf_counter()
        res = fn(cfg)
        if res is None:
            continue
        achieved, note = res
        target = cfg.tol(key)
        passed = bool(achieved <= target) if math.isfinite(achieved) else False
        out.append(CheckResult(s, name, anchor, float(achieved), target, passed,
                               time.perf_counter() - t0, note))
    return out


# -- oscillator ---------------------------------------------------------------

@_check("oscillator", "gram_identity", "eigenbasis orthonormality <psi_m|psi_n> = delta_mn", "gram")
def _gram(cfg: VerifyConfig):
    params = cfg.params()
    states = [eigenfunction(params, n, grid=np.array([1.0])) for n in range(cfg.nmax + 1)]
    err = 0.0
    for m in range(len(states)):
        for n in range(m, len(states)):
            v = overlap(states[m], states[n], tol=1e-12).value
            err = max(err, abs(v - (m == n)))
    return err, f"n <= {cfg.nmax}"


@_check("oscillator", "schrodinger_residual", "h0 psi_n = 2(k+n) psi_n", "residual")
def _schrodinger(cfg: VerifyConfig):
    params = cfg.params()
    err = max(
        hamiltonian_residual(params, eigenfunction(params, n), energy(params, n))
        for n in range(cfg.nmax + 1)
    )
    return err, "6th-order finite differences"


@_check("oscillator", "casimir", "Casimir k(1-k) = 3/16 - b/4 on every level", "algebra")
def _casimir(cfg: VerifyConfig):
    from .oscillator import casimir_expectation

    params = cfg.params(cfg.nmax + 2)
    err = max(abs(casimir_expectation(params, n) - params.casimir) for n in range(cfg.nmax + 1))
    return err, ""


# -- coherent -----------------------------------------------------------------

@_check("coherent", "coordinate_series_duality", "closed coordinate form of |z> vs basis series", "duality")
def _duality(cfg: VerifyConfig):
    params = cfg.params(80)
    rng = np.random.default_rng(cfg.seed)
    grid = default_grid(params, n_points=400, x_max=12.0)
    err = 0.0
    for _ in range(6):
        z = 0.6 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        closed = coh.coherent_wavefunction(params, z, grid)
        series = coh.coherent_series_wavefunction(params, z, grid)
        err = max(err, float(np.max(np.abs(closed(grid) - series(grid)))))
    return err, "|z| <= 0.6, 80 basis states"


@_check("coherent", "resolution_of_unity", "int <m|z><z|n> dmu = delta_mn", "resolution")
def _resolution(cfg: VerifyConfig):
    params = cfg.params()
    if not params.k > 0.5:
        return None
    res = coh.resolution_matrix(params, cfg.nmax + 1)
    return float(np.max(np.abs(res.value - np.eye(cfg.nmax + 1)))), f"{cfg.nmax + 1}x{cfg.nmax + 1}"


@_check("coherent", "eigen_relation", "(k- - 2kz - z^2 k+)|z> = 0", "algebra")
def _eigen(cfg: VerifyConfig):
    params = cfg.params()
    err = max(coh.eigen_relation_residual(params, z) for z in (0.3, -0.2 + 0.4j, 0.55j))
    return err, ""


# -- darboux ------------------------------------------------------------------

def _valid_spec(cfg: VerifyConfig, basis_dim: int = 80):
    spec = cfg.spec(basis_dim)
    spec.require_valid()
    return spec


@_check("darboux", "norm_law", "<L~psi_n|L~psi_n> = E_n - alpha", "norm_law")
def _norm_law(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    params = spec.params
    err = 0.0
    for n in range(cfg.nmax + 1):
        w = dx.apply_L_tilde(spec, eigenfunction(params, n, grid=np.array([1.0])))
        v = overlap(w, w, tol=1e-12).value
        gap = energy(params, n) - spec.alpha
        err = max(err, abs(v - gap) / gap)
    return err, f"{spec.family} p={spec.p}, relative"


@_check("darboux", "partner_residual", "h1 phi_n = E_n phi_n with h1 = h0 + A", "residual")
def _partner_residual(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    err = max(dx.intertwining_residual(spec, n) for n in range(cfg.nmax + 1))
    return err, "6th-order finite differences"


@_check("darboux", "potential_closed_form", "closed-form A vs -2 (ln u)''", "potential")
def _potential(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    x = default_grid(spec.params)
    x = x[x > 0.05]
    a = dx.potential_difference(spec, x)
    b = dx.potential_difference_fd(spec, x)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))), "x in (0.05, x_max)"


@_check("darboux", "normalization_integral", "int u^-2 dx = (-1)^p 2^(2k-2) p! Gamma(2k-p-1)", "normalization")
def _normalization(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    if spec.regime is not dx.Regime.EXACT:
        return None
    q = dx.normalization_integral(spec).value
    closed = dx.normalization_closed_form(spec)
    return abs(q - abs(closed)) / abs(closed), "relative; the integral is |closed form|"


@_check("darboux", "ground_state", "phi_-1 unit norm, h1 phi_-1 = alpha phi_-1", "residual")
def _ground(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    if spec.regime is not dx.Regime.EXACT:
        return None
    g = dx.partner_ground_state(spec)
    norm = overlap(g, g, tol=1e-12).value
    res = hamiltonian_residual(spec.params, g, spec.alpha,
                               extra_potential=lambda x: dx.potential_difference(spec, x))
    return max(abs(norm - 1.0), res), f"norm={norm:.12f}"


@_check("darboux", "partner_identification", "U p=0: phi_n = +-psi_(n+1)(k - 1/2)", "partner")
def _partner_id(cfg: VerifyConfig):
    spec = _valid_spec(cfg)
    if spec.family != "U" or spec.p != 0 or spec.k < 1.0:
        return None
    shifted = dx.partner_oscillator_params(spec)
    grid = default_grid(spec.params)
    err = 0.0
    for n in range(cfg.nmax + 1):
        phi = dx.transform_state(spec, n, grid)
        ref = eigenfunction(shifted, n + 1, grid)
        a, b = phi(grid), ref(grid)
        sign = np.sign(np.vdot(b, a).real)
        err = max(err, float(np.max(np.abs(a - sign * b))))
    return err, f"k' = {shifted.k}"


# -- grassmann ----------------------------------------------------------------

def _random_super(rng, n=None):
    shape = (4,) if n is None else (n, 4)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@_check("grassmann", "structure_constants", "alpha^2 = alphabar^2 = 0, alpha alphabar = -alphabar alpha", "grassmann")
def _structure(cfg: VerifyConfig):
    A, B = gr.ALPHA.coeffs, gr.ALPHA_BAR.coeffs
    err = max(
        np.abs(gr.mul(A, A)).max(),
        np.abs(gr.mul(B, B)).max(),
        np.abs(gr.mul(A, B) + gr.mul(B, A)).max(),
        np.abs(gr.mul(B, A) - gr.TOP.coeffs).max(),
    )
    return float(err), ""


@_check("grassmann", "associativity", "(ab)c = a(bc), distributivity", "grassmann")
def _assoc(cfg: VerifyConfig):
    rng = np.random.default_rng(cfg.seed)
    a, b, c = (_random_super(rng, 50) for _ in range(3))
    e1 = np.abs(gr.mul(gr.mul(a, b), c) - gr.mul(a, gr.mul(b, c))).max()
    e2 = np.abs(gr.mul(a, b + c) - gr.mul(a, b) - gr.mul(a, c)).max()
    return float(max(e1, e2)), "50 random triples"


@_check("grassmann", "conjugation", "conj(ab) = conj(a) conj(b), conj(conj(a)) = a", "grassmann")
def _conj(cfg: VerifyConfig):
    rng = np.random.default_rng(cfg.seed + 1)
    a, b = _random_super(rng, 50), _random_super(rng, 50)
    e1 = np.abs(gr.conj(gr.mul(a, b)) - gr.mul(gr.conj(a), gr.conj(b))).max()
    e2 = np.abs(gr.conj(gr.conj(a)) - a).max()
    return float(max(e1, e2)), "order-preserving convention"


@_check("grassmann", "berezin", "int alphabar alpha = 1, int of 1, alpha, alphabar = 0", "grassmann")
def _berezin(cfg: VerifyConfig):
    vals = [gr.berezin(x) for x in (gr.ONE, gr.ALPHA, gr.ALPHA_BAR, gr.TOP)]
    e1 = max(abs(vals[0]), abs(vals[1]), abs(vals[2]), abs(vals[3] - 1))
    rng = np.random.default_rng(cfg.seed + 2)
    a, b = _random_super(rng, 20), _random_super(rng, 20)
    e2 = np.abs(gr.berezin(2 * a - 3j * b) - (2 * gr.berezin(a) - 3j * gr.berezin(b))).max()
    return float(max(e1, e2)), ""


@_check("grassmann", "normalization_selfconjugate", "N = 1 + (i/2) alphabar alpha is real", "grassmann")
def _n_real(cfg: VerifyConfig):
    N = gr.ONE + 0.5j * gr.TOP
    return float(np.abs(N.conj().coeffs - N.coeffs).max()), ""


# -- superspace ---------------------------------------------------------------

def _super_setup(cfg: VerifyConfig, basis_dim: int):
    spec = _valid_spec(cfg, basis_dim)
    return spec.params, spec


def _apply(word: str, s: ss.Superstate) -> ss.Superstate:
    # rightmost generator acts first
    for g in reversed(word.split()):
        s = ss.apply_generator(g, s)
    return s


def _bracket(a: str, b: str, s: ss.Superstate) -> ss.Superstate:
    sign = -1.0 if ss.generator_parity(a) * ss.generator_parity(b) == 0 else 1.0
    return _apply(f"{a} {b}", s) + _apply(f"{b} {a}", s).scale(sign)


@_check("superspace", "closure", "[K-,K+] = 2K0, [K0,K+-] = +-K+-, {Q+,Q-} = I, [K,Q] = 0", "algebra")
def _closure(cfg: VerifyConfig):
    size = cfg.nmax + 3
    params, spec = _super_setup(cfg, size)
    rels = [
        ("K-", "K+", lambda s: _apply("K0", s).scale(2.0)),
        ("K0", "K+", lambda s: _apply("K+", s)),
        ("K0", "K-", lambda s: _apply("K-", s).scale(-1.0)),
        ("Q+", "Q-", lambda s: _apply("I", s)),
        ("Q+", "Q+", lambda s: _apply("Q+", s).scale(0.0)),
        ("Q-", "Q-", lambda s: _apply("Q-", s).scale(0.0)),
    ]
    rels += [(k, q, lambda s: s.scale(0.0)) for k in ("K0", "K+", "K-") for q in ("Q+", "Q-")]
    err = 0.0
    for n in range(size - 1):
        for sector in ("even", "odd"):
            s = ss.basis_state(params, spec, sector, n)
            for a, b, rhs in rels:
                err = max(err, (_bracket(a, b, s) - rhs(s)).max_abs())
    return err, f"basis states n <= {size - 2}"


@_check("superspace", "superadjoint_table", "K0+ = K0, K+-+ = K-+, Q+-+ = i Q-+", "algebra")
def _adjoints(cfg: VerifyConfig):
    size = cfg.nmax + 3
    params, spec = _super_setup(cfg, size)
    rng = np.random.default_rng(cfg.seed + 3)

    def rand(parity):
        c = np.zeros(size, complex)
        c[: size - 1] = rng.normal(size=size - 1) + 1j * rng.normal(size=size - 1)
        return ss.superstate(params, spec, **{("even" if parity == 0 else "odd"): c})

    err = 0.0
    for g in ("K0", "K+", "K-", "Q+", "Q-", "B0"):
        h, c = ss.superadjoint(g)
        for pv in (0, 1):
            for pw in (0, 1):
                v, w = rand(pv), rand(pw)
                lhs = ss.super_inner(ss.apply_generator(h, v).scale(c), w)
                sign = (-1) ** (pv * ss.generator_parity(g))
                rhs = ss.super_inner(v, ss.apply_generator(g, w)).coeffs * sign
                err = max(err, float(np.abs(lhs.coeffs - rhs).max()) / max(1.0, np.abs(rhs).max()))
    return err, "random homogeneous pairs, relative"


@_check("superspace", "ground_annihilated", "every generator annihilates theta phi_-1", "algebra")
def _ground_trivial(cfg: VerifyConfig):
    params, spec = _super_setup(cfg, cfg.nmax + 1)
    if spec.regime is not dx.Regime.EXACT:
        return None
    g = ss.basis_state(params, spec, "ground")
    return max(ss.apply_generator(x, g).max_abs() for x in ss.GENERATORS), ""


@_check("superspace", "two_fold_degeneracy", "K0 psi_n = (k+n) psi_n and K0 theta phi_n = (k+n) theta phi_n", "algebra")
def _degeneracy(cfg: VerifyConfig):
    params, spec = _super_setup(cfg, cfg.nmax + 1)
    err = 0.0
    for n in range(cfg.nmax + 1):
        for sector in ("even", "odd"):
            s = ss.basis_state(params, spec, sector, n)
            err = max(err, (ss.apply_generator("K0", s) - s.scale(params.k + n)).max_abs())
    return err, spec.regime.value


@_check("superspace", "supercoherent_eigenstate", "Q- Psi_{z alpha} = alpha Psi_{z alpha}, supernorm 1", "supercoherent")
def _supercoherent(cfg: VerifyConfig):
    params, spec = _super_setup(cfg, 80)
    rng = np.random.default_rng(cfg.seed + 4)
    err = 0.0
    for _ in range(20):
        z = 0.6 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        a = complex(rng.normal(), rng.normal())
        label = ss.SupercoherentLabel(z, a)
        res = ss.annihilation_check(params, spec, label)
        s = ss.supercoherent_state(params, spec, label)
        dev = ss.super_inner(s, s).coeffs - gr.ONE.coeffs
        err = max(err, res.max_abs(), float(np.abs(dev).max()))
    return err, "20 random labels, all algebra components"


@_check("superspace", "super_resolution", "int P_{zbar alphabar} i dalpha dalphabar dmu = I", "super_resolution")
def _super_resolution(cfg: VerifyConfig):
    size = min(cfg.nmax + 1, 8)
    params, spec = _super_setup(cfg, size)
    if not params.k > 0.5:
        return None
    _, op, _ = ss.super_resolution_matrix(params, spec, size)
    cross = max(np.abs(op[:size, size:]).max(), np.abs(op[size:, :size]).max())
    if cross != 0.0:
        return float("inf"), f"cross blocks not exactly zero ({cross:.3e})"
    return float(np.abs(op - np.eye(2 * size)).max()), "cross blocks exactly zero"


@_check("superspace", "superholomorphic_inner", "holomorphic superscalar product = <psi1|psi2> + i<phi1|phi2>", "superholo")
def _superholo(cfg: VerifyConfig):
    size = min(cfg.nmax + 1, 10)
    params, spec = _super_setup(cfg, size)
    if not params.k > 0.5:
        return None
    rng = np.random.default_rng(cfg.seed + 5)

    def rand():
        c = lambda: rng.normal(size=size) + 1j * rng.normal(size=size)  # noqa: E731
        return ss.superstate(params, spec, even=c(), odd=c())

    err = 0.0
    for _ in range(3):
        s1, s2 = rand(), rand()
        direct = ss.super_inner(s1, s2)
        holo = ss.superholo_inner(params, spec, s1, s2).value
        err = max(err, abs(holo - direct.c0) / max(1.0, abs(direct.c0)))
    return err, f"kappa = {ss.HOLOMORPHIC_PREFACTOR_KAPPA}"
