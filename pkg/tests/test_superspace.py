"""Superspace checks.  The Grassmann oracle below is a generic exterior-algebra
implementation (monomials as sorted generator tuples) written independently of
the 4-vector kernel."""

import itertools

import numpy as np
import pytest

from susyosc import grassmann as gr
from susyosc import superspace as ss
from susyosc.darboux import InvalidTransformError, make_transform
from susyosc.grassmann import ALPHA, ALPHA_BAR, ONE, TOP, Supernumber
from susyosc.oscillator import params_from_k

# -- independent exterior-algebra oracle; generator 0 = alphabar, 1 = alpha ---

def _mono_mul(m1, m2):
    seq = m1 + m2
    if len(set(seq)) < len(seq):
        return None, 0
    inv = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return tuple(sorted(seq)), (-1) ** inv


def ext_mul(x, y):
    out = {}
    for (m1, c1), (m2, c2) in itertools.product(x.items(), y.items()):
        m, s = _mono_mul(m1, m2)
        if m is not None:
            out[m] = out.get(m, 0) + s * c1 * c2
    return out


def ext_conj(x):
    out = {}
    for m, c in x.items():
        term = {(): np.conj(c)}
        for g in m:
            term = ext_mul(term, {(1 - g,): 1})
        for mm, cc in term.items():
            out[mm] = out.get(mm, 0) + cc
    return out


def ext_from(s: Supernumber):
    return {(): s.c0, (1,): s.c1, (0,): s.c2, (0, 1): s.c3}


def ext_to(x):
    return np.array([x.get(m, 0) for m in [(), (1,), (0,), (0, 1)]], dtype=complex)


def ext_pair(v_even, v_odd, w_even, w_odd):
    """<v|w> from the pairing table, term by term on the oracle algebra."""
    total = {}
    for a, b in zip(v_even, w_even):
        for m, c in ext_mul(ext_conj(a), b).items():
            total[m] = total.get(m, 0) + c
    for a, b in zip(v_odd, w_odd):
        # (-1)^(e(theta phi) e(b)): odd generators of b pass theta
        b_flip = {m: (-1) ** len(m) * c for m, c in b.items()}
        for m, c in ext_mul(ext_conj(a), b_flip).items():
            total[m] = total.get(m, 0) + 1j * c
    return total


def _rand_super(rng, size):
    return rng.normal(size=(size, 4)) + 1j * rng.normal(size=(size, 4))


# ---------------------------------------------------------------------------

def test_oracle_agrees_with_kernel(rng):
    for _ in range(20):
        a, b = (Supernumber.from_array(x) for x in _rand_super(rng, 2))
        np.testing.assert_allclose(ext_to(ext_mul(ext_from(a), ext_from(b))), (a * b).coeffs, atol=1e-12)
        np.testing.assert_allclose(ext_to(ext_conj(ext_from(a))), a.conj().coeffs, atol=1e-12)


def test_super_inner_matches_oracle(exact_spec, rng):
    p = exact_spec.params
    e1, o1, e2, o2 = (_rand_super(rng, p.basis_dim) for _ in range(4))
    s1 = ss.superstate(p, exact_spec, even=e1, odd=o1)
    s2 = ss.superstate(p, exact_spec, even=e2, odd=o2)
    conv = lambda arr: [ext_from(Supernumber.from_array(r)) for r in arr]  # noqa: E731
    ref = ext_to(ext_pair(conv(e1), conv(o1), conv(e2), conv(o2)))
    np.testing.assert_allclose(ss.super_inner(s1, s2).coeffs, ref, atol=1e-10)


def test_pairing_table(exact_spec):
    p = exact_spec.params
    e0 = ss.basis_state(p, exact_spec, "even", 0)
    o0 = ss.basis_state(p, exact_spec, "odd", 0)
    g = ss.basis_state(p, exact_spec, "ground")
    assert ss.super_inner(e0, e0) == ONE
    assert ss.super_inner(o0, o0).isclose(1j)
    assert ss.super_inner(g, g).isclose(1j)
    assert ss.super_inner(e0, o0).isclose(0) and ss.super_inner(g, o0).isclose(0)


def test_conjugation_symmetry(broken_spec, rng):
    p = broken_spec.params
    for pv, pw in itertools.product((0, 1), repeat=2):
        c = lambda: rng.normal(size=p.basis_dim) + 1j * rng.normal(size=p.basis_dim)  # noqa: E731
        v = ss.superstate(p, broken_spec, **{"even" if pv == 0 else "odd": c()})
        w = ss.superstate(p, broken_spec, **{"even" if pw == 0 else "odd": c()})
        assert v.parity() == pv and w.parity() == pw
        lhs = ss.super_inner(v, w).conj()
        rhs = (-1) ** (pv * pw) * ss.super_inner(w, v).coeffs
        np.testing.assert_allclose(lhs.coeffs, rhs, atol=1e-12)


def test_sign_rule_for_odd_coefficients(exact_spec):
    p = exact_spec.params
    o = ss.basis_state(p, exact_spec, "odd", 2)
    # <b1 v | b2 w> = (-1)^(e(v) e(b2)) conj(b1) b2 <v|w>
    val = ss.super_inner(o.scale(ALPHA), o.scale(ALPHA))
    expected = -1 * (ALPHA_BAR * ALPHA) * 1j
    assert val.isclose(expected)


def test_truncation_mismatch_rejected(exact_spec):
    other = make_transform(params_from_k(1.25, 5), "U", 0)
    with pytest.raises(ValueError):
        ss.super_inner(ss.basis_state(exact_spec.params, exact_spec, "even"),
                       ss.basis_state(other.params, other, "even"))
    broken = make_transform(exact_spec.params, "V", 0)
    with pytest.raises(ValueError):
        ss.super_inner(ss.basis_state(exact_spec.params, exact_spec, "even"),
                       ss.basis_state(broken.params, broken, "even"))
    with pytest.raises(ValueError):
        ss.superstate(broken.params, broken, ground=1.0)


def test_invalid_spec_rejected():
    spec = make_transform(params_from_k(2.1, 6), "U", 1)
    with pytest.raises(InvalidTransformError):
        ss.basis_state(spec.params, spec, "even")


def _apply(word, s):
    for g in reversed(word.split()):
        s = ss.apply_generator(g, s)
    return s


@pytest.mark.parametrize("spec_name", ["exact_spec", "broken_spec"])
def test_anticommutator_and_degeneracy(spec_name, request):
    spec = request.getfixturevalue(spec_name)
    p = spec.params
    for n in range(p.basis_dim):
        for sector in ("even", "odd"):
            s = ss.basis_state(p, spec, sector, n)
            anti = _apply("Q- Q+", s) + _apply("Q+ Q-", s)
            assert (anti - s).max_abs() == 0
            assert (ss.apply_generator("K0", s) - s.scale(p.k + n)).max_abs() < 1e-14
            assert (ss.apply_generator("B0", s) - s.scale(1 if sector == "even" else -1)).max_abs() == 0


def test_ground_sector_is_trivial(exact_spec):
    g = ss.basis_state(exact_spec.params, exact_spec, "ground")
    for name in ss.GENERATORS:
        assert ss.apply_generator(name, g).max_abs() == 0


def test_k_plus_reports_truncation_loss(exact_spec):
    top = ss.basis_state(exact_spec.params, exact_spec, "odd", exact_spec.params.basis_dim - 1)
    assert ss.apply_generator("K+", top).tail > 0
    with pytest.raises(ValueError):
        ss.apply_generator("K7", top)


def test_superhamiltonian_levels(exact_spec, broken_spec):
    lv = ss.superhamiltonian_levels(exact_spec.params, exact_spec, 3)
    assert lv[0] == (exact_spec.alpha, 1, ("theta phi_-1",))
    assert [d for _, d, _ in lv[1:]] == [2, 2, 2]
    assert all(d == 2 for _, d, _ in ss.superhamiltonian_levels(broken_spec.params, broken_spec, 3))


def test_supercoherent_fiducial_and_norm(exact_spec, rng):
    p = exact_spec.params
    s = ss.supercoherent_state(p, exact_spec, ss.SupercoherentLabel(0.0, 0.0))
    assert (s - ss.basis_state(p, exact_spec, "even", 0)).max_abs() == 0
    big = make_transform(params_from_k(1.25, 80), "V", 2)
    for _ in range(10):
        label = ss.SupercoherentLabel(0.6 * rng.uniform() * np.exp(6j * rng.uniform()),
                                      complex(*rng.normal(size=2)))
        s = ss.supercoherent_state(big.params, big, label)
        np.testing.assert_allclose(ss.super_inner(s, s).coeffs, [1, 0, 0, 0], atol=1e-12)
        assert ss.annihilation_check(big.params, big, label).max_abs() < 1e-12


def test_annihilation_trivial_alpha(broken_spec):
    label = ss.SupercoherentLabel(0.3 + 0.1j, 0.0)
    assert ss.annihilation_check(broken_spec.params, broken_spec, label).max_abs() == 0


def test_label_validation():
    with pytest.raises(ValueError):
        ss.SupercoherentLabel(1.1, 1.0)
    with pytest.raises(ValueError):
        ss.SupercoherentLabel.from_supernumber(0.1, ONE + ALPHA)
    assert ss.SupercoherentLabel.from_supernumber(0.1, 2 * ALPHA).a == 2


def test_kappa_from_grassmann_expansion(exact_spec):
    """<Psi_{zbar alphabar}|s> = (1-|z|^2)^k (1 - kappa alphabar alpha) Psi(z, alpha).

    The left side is expanded on the oracle algebra from the definition of
    the supercoherent state; kappa is read off the even basis states."""
    p = exact_spec.params
    k = p.k
    z = 0.35 - 0.2j
    gam = ss.monomial_weights(k, p.basis_dim)
    zb = np.conj(z)
    c = (1 - abs(z) ** 2) ** k * gam * zb ** np.arange(p.basis_dim)
    ab = {(0,): 1.0}
    # N(zbar, alphabar) = 1 + (i/2) conj(alphabar) alphabar
    N = {(): 1.0, **{m: 0.5j * v for m, v in ext_mul(ext_conj(ab), ab).items()}}
    psi_even = [ext_mul(N, {(): cn}) for cn in c]
    psi_odd = [ext_mul(ext_mul(N, ab), {(): -cn}) for cn in c]
    kappas = []
    for n in range(4):
        s = ss.basis_state(p, exact_spec, "even", n)
        e = [{(): 0.0}] * p.basis_dim
        e[n] = {(): 1.0}
        lhs = ext_to(ext_pair(psi_even, psi_odd, e, [{(): 0.0}] * p.basis_dim))
        rhs = ss.superholomorphic_rep(p, exact_spec, s, z).coeffs * (1 - abs(z) ** 2) ** k
        kappas.append(-lhs[3] / rhs[0])
        assert lhs[0] == pytest.approx(rhs[0], abs=1e-14)
    np.testing.assert_allclose(kappas, ss.HOLOMORPHIC_PREFACTOR_KAPPA, atol=1e-13)
    # odd states: the prefactor's alphabar alpha term is killed by alpha
    for n in range(3):
        s = ss.basis_state(p, exact_spec, "odd", n)
        lhs = ss.coherent_projection(p, exact_spec, s, z)
        rhs = ss.superholomorphic_rep(p, exact_spec, s, z)
        pref = Supernumber((1 - abs(z) ** 2) ** k) * (ONE - ss.HOLOMORPHIC_PREFACTOR_KAPPA * TOP)
        assert lhs.isclose(pref * rhs, atol=1e-14)


def test_superholomorphic_rep_examples(exact_spec):
    p = exact_spec.params
    z = 0.2 + 0.3j
    e0 = ss.superholomorphic_rep(p, exact_spec, ss.basis_state(p, exact_spec, "even", 0), z)
    assert e0 == ONE
    o0 = ss.superholomorphic_rep(p, exact_spec, ss.basis_state(p, exact_spec, "odd", 0), z)
    assert o0.isclose(-1j * ALPHA)
    arr = ss.superholomorphic_rep(p, exact_spec, ss.basis_state(p, exact_spec, "even", 1), np.array([z, 0]))
    assert arr.shape == (2, 4)


def test_exp_minus_f_from_definition():
    p = params_from_k(1.6, 6)
    z = np.array([0.1, 0.5 - 0.3j])
    got = ss.exp_minus_f(p, z)
    expected = np.multiply.outer((1 - np.abs(z) ** 2) ** (2 * p.k), (ONE - 1j * TOP).coeffs)
    np.testing.assert_allclose(got, expected, atol=1e-15)


def test_swapped_exponential_ordering_fails_consistency(monkeypatch, rng):
    """With e^-f = (1 - i alpha alphabar)(...) the holomorphic product no longer
    reproduces the superscalar product; the definition-derived form does."""
    p = params_from_k(1.3, 8)
    spec = make_transform(p, "V", 0)
    c = lambda: rng.normal(size=8) + 1j * rng.normal(size=8)  # noqa: E731
    s1 = ss.superstate(p, spec, even=c(), odd=c())
    s2 = ss.superstate(p, spec, even=c(), odd=c())
    direct = ss.super_inner(s1, s2).c0
    assert ss.superholo_inner(p, spec, s1, s2).value == pytest.approx(direct, rel=1e-10)
    swapped = (ONE - 1j * ALPHA * ALPHA_BAR).coeffs
    monkeypatch.setattr(ss, "exp_minus_f",
                        lambda params, z: np.multiply.outer((1 - np.abs(z) ** 2) ** (2 * params.k), swapped))
    assert abs(ss.superholo_inner(p, spec, s1, s2).value - direct) > 1e-2


@pytest.mark.parametrize("spec_name", ["exact_spec", "broken_spec"])
def test_super_resolution(spec_name, request):
    spec = request.getfixturevalue(spec_name)
    pairing = ss.super_resolution_check(spec.params, spec, 0, 0, 0, 0)
    assert pairing[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert pairing[1, 1] == pytest.approx(1j, abs=1e-12)  # i-weighted odd norm
    assert pairing[0, 1] == 0 and pairing[1, 0] == 0
    _, op, err = ss.super_resolution_matrix(spec.params, spec, 6)
    np.testing.assert_allclose(op, np.eye(12), atol=1e-10)


def test_superholo_inner_examples(exact_spec):
    p = exact_spec.params
    e0 = ss.basis_state(p, exact_spec, "even", 0)
    o0 = ss.basis_state(p, exact_spec, "odd", 0)
    assert ss.superholo_inner(p, exact_spec, e0, e0).value == pytest.approx(1.0, abs=1e-12)
    assert ss.superholo_inner(p, exact_spec, o0, o0).value == pytest.approx(1j, abs=1e-12)
    assert ss.superholo_inner(p, exact_spec, e0, o0).value == pytest.approx(0.0, abs=1e-14)
