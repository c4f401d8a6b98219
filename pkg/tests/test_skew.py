import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orelab import linear as la
from orelab.algebra import ideal_generated_by
from orelab.corpus import diagonal_algebra, upper_triangular
from orelab.errors import CapExceededError, HypothesisError
from orelab.lnd import grassmann_algebra, grassmann_truncation
from orelab.maps import GeneratorFamily, LinearEndomap, SigmaDerivation, conjugation, inner_derivation, twisted_inner
from orelab.serialize import certificate_from_json
from orelab.skew import (
    SkewPolynomial,
    SkewSpan,
    TermBudget,
    certify_theorem_14,
    certify_theorem_16,
    enumerate_B,
    multiply_skew,
    push_left,
    recheck_certificate,
    verify_product_inclusion,
)

import oracles


def grassmann_family(g, count=1):
    a, d = grassmann_algebra(g)
    sd = d.as_sigma_derivation()
    return a, GeneratorFamily(tuple((f"x{i + 1}" if count > 1 else "x", sd) for i in range(count)))


def twisted_t3_family(c=1):
    """T3 with a conjugation-twisted generator and an inner-derivation generator."""
    t3 = upper_triangular(3)
    u = la.vector([1, c, 0, 1, 0, 1])
    u_inv = la.vector([1, -c, 0, 1, 0, 1])
    sigma = conjugation(t3, u, u_inv)
    ad = inner_derivation(t3, la.vector([0, 0, 0, 0, 1, 0]))
    return t3, GeneratorFamily((("t", twisted_inner(sigma)), ("s", SigmaDerivation.ordinary(ad))))


def poly_dict(p):
    return dict(p.terms)


# ---------------------------------------------------------------------------
# arithmetic


def test_push_left_examples():
    t = grassmann_truncation(3)
    _, fam = grassmann_family(3)
    e1, e2 = t.monomial((1,)), t.monomial((2,))
    assert push_left(fam, "x", e2) == SkewPolynomial(fam, {("x",): e2, (): e1})
    assert push_left(fam, "x", e1) == SkewPolynomial(fam, {("x",): e1})
    with pytest.raises(KeyError):
        push_left(fam, "y", e1)


def test_multiply_examples():
    t = grassmann_truncation(3)
    a, fam = grassmann_family(3)
    e1, e2 = t.monomial((1,)), t.monomial((2,))
    p = SkewPolynomial.monomial(fam, e1, ("x",))
    q = SkewPolynomial.monomial(fam, e2)
    assert multiply_skew(p, q) == SkewPolynomial.monomial(fam, t.monomial((1, 2)), ("x",))
    assert (p * SkewPolynomial.zero(fam)).is_zero()
    r, s = SkewPolynomial.monomial(fam, e2), SkewPolynomial.monomial(fam, t.monomial((3,)))
    assert r * s == SkewPolynomial.monomial(fam, t.monomial((2, 3)))


def test_family_mismatch_rejected():
    _, f1 = grassmann_family(2)
    _, f2 = grassmann_family(2)
    p = SkewPolynomial.monomial(f1, [1, 0, 0])
    q = SkewPolynomial.monomial(f2, [1, 0, 0])
    with pytest.raises(ValueError):
        multiply_skew(p, q)


coeff = st.integers(-2, 2).map(Fraction)


def skew_poly_strategy(fam, max_len=2):
    n = fam.parent.dim
    words = [tuple(w) for j in range(max_len + 1) for w in itertools.product(fam.labels, repeat=j)]
    vec = st.lists(coeff, min_size=n, max_size=n).map(tuple)
    return st.dictionaries(st.sampled_from(words), vec, max_size=3).map(lambda d: SkewPolynomial(fam, d))


T3, TWISTED = twisted_t3_family()
E3, GRASS2 = grassmann_family(3, 2)


@given(skew_poly_strategy(TWISTED), skew_poly_strategy(TWISTED))
def test_product_matches_closed_form_oracle(p, q):
    assert poly_dict(p * q) == oracles.skew_mul(TWISTED, poly_dict(p), poly_dict(q))


@given(skew_poly_strategy(GRASS2), skew_poly_strategy(GRASS2))
def test_grassmann_product_matches_oracle(p, q):
    assert poly_dict(p * q) == oracles.skew_mul(GRASS2, poly_dict(p), poly_dict(q))


@given(skew_poly_strategy(TWISTED, 1), skew_poly_strategy(TWISTED, 1), skew_poly_strategy(TWISTED, 1))
def test_associativity(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(skew_poly_strategy(TWISTED), skew_poly_strategy(TWISTED))
def test_degree_bound(p, q):
    prod = p * q
    if not prod.is_zero():
        assert prod.degree() <= p.degree() + q.degree()


@given(st.lists(coeff, min_size=6, max_size=6))
def test_push_left_has_degree_at_most_one(r):
    for t in TWISTED.labels:
        assert push_left(TWISTED, t, r).degree() <= 1


@given(skew_poly_strategy(GRASS2), st.lists(st.integers(0, 6), min_size=1, max_size=3))
def test_coefficient_ideal_is_closed(q, picks):
    # monomials containing e1 span a d-stable ideal of E_3
    t = grassmann_truncation(3)
    ideal = ideal_generated_by(E3, la.rref([t.monomial((1,))], 7)).space
    p = SkewPolynomial(GRASS2, {("x1",) * (i % 2): ideal.basis[i % ideal.dim] for i in picks})
    for prod in (p * q, q * p):
        for c in prod.terms.values():
            assert la.contains(ideal, c)


def test_span_basics():
    _, fam = grassmann_family(2)
    p = SkewPolynomial.monomial(fam, [1, 0, 0], ("x",))
    q = SkewPolynomial.monomial(fam, [0, 1, 0])
    span = SkewSpan(fam, [p, q, p + q])
    assert span.dim == 2
    assert p + q in span
    assert span.coefficient_space() == la.rref([[1, 0, 0], [0, 1, 0]], 3)
    assert span.max_degree() == 1


# ---------------------------------------------------------------------------
# the index set B(a) and the product inclusion


def test_enumerate_B_examples():
    assert enumerate_B((0,)) == [(0,)]
    assert enumerate_B((1,)) == [(0,), (1,)]
    assert enumerate_B((1, 1)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_enumerate_B_is_exhaustive(a):
    got = enumerate_B(a)
    prefix = list(itertools.accumulate(a))
    brute = [
        b
        for b in itertools.product(*(range(prefix[-1] + 1) for _ in a))
        if all(s <= p for s, p in zip(itertools.accumulate(b), prefix))
    ]
    assert got == sorted(brute)
    assert len(set(got)) == len(got)


def test_product_inclusion_examples():
    t = grassmann_truncation(4)
    a, fam = grassmann_family(4)
    assert verify_product_inclusion(la.zero_subspace(a.dim), (2, 1), fam)
    v = la.rref([t.monomial((2,)), t.monomial((3,))], a.dim)
    c = verify_product_inclusion(v, (1, 1), fam)
    assert c, c.witness
    assert c.transcript["B_size"] == 5
    for a1 in range(4):
        assert verify_product_inclusion(v, (a1,), fam)


def test_product_inclusion_cap():
    a, fam = grassmann_family(2)
    with pytest.raises(CapExceededError):
        verify_product_inclusion(a.full(), (5, 4), fam)


@given(
    st.lists(st.integers(-2, 2), min_size=6, max_size=6),
    st.lists(st.integers(0, 2), min_size=1, max_size=3),
    st.integers(-2, 2),
)
def test_product_inclusion_random(vints, a, c):
    t3, fam = twisted_t3_family(c)
    v = la.rref([la.vector(vints)], 6)
    check = verify_product_inclusion(v, a, fam)
    assert check, (a, check.witness)


# ---------------------------------------------------------------------------
# certificates


def test_power_certificate_zero_space():
    a, fam = grassmann_family(2)
    cert = certify_theorem_14(a, la.zero_subspace(3), fam, 2)
    assert cert.verified
    assert all(sp.is_zero() for _, sp in cert.family_F)


@pytest.mark.parametrize("g,N", [(2, 1), (2, 2), (3, 1)])
def test_power_certificate_grassmann(g, N):
    a, fam = grassmann_family(g)
    cert = certify_theorem_14(a, a.full(), fam, N)
    assert cert.n == 2
    assert cert.bound_l == 2 * cert.n * cert.s
    assert cert.verified
    for _, sp in cert.family_F:
        assert la.is_subspace(sp, cert.ideal_I.space)
    assert oracles.brute_force_power_vanishes(fam, a.full().basis, N, cert.bound_l)
    assert recheck_certificate(a, fam, cert)


def test_power_certificate_hypothesis_failure():
    t2 = upper_triangular(2)
    fam = GeneratorFamily.single(SigmaDerivation.ordinary(inner_derivation(t2, t2.basis_vector(1))))
    with pytest.raises(HypothesisError):
        certify_theorem_14(t2, t2.full(), fam, 1)


def test_certificate_json_round_trip():
    a, fam = grassmann_family(2)
    cert = certify_theorem_14(a, a.full(), fam, 1)
    data = json.loads(json.dumps(cert.to_json()))
    back = certificate_from_json(data, a)
    assert back.bound_l == cert.bound_l and back.s == cert.s
    assert back.ideal_I.space == cert.ideal_I.space
    assert recheck_certificate(a, fam, back)


def test_recheck_rejects_tampered_certificate():
    a, fam = grassmann_family(2)
    cert = certify_theorem_14(a, a.full(), fam, 1)
    data = cert.to_json()
    data["s"] = 1
    data["bound_l"] = 2 * data["n"]
    assert not recheck_certificate(a, fam, certificate_from_json(data, a))


def test_descent_semiprime_is_empty():
    qq = diagonal_algebra(2)
    fam = GeneratorFamily.single(SigmaDerivation.ordinary(LinearEndomap.zero(qq)))
    assert certify_theorem_16(qq, fam, 1) == []


def test_descent_grassmann_one_level():
    a, fam = grassmann_family(2)
    certs = certify_theorem_16(a, fam, 1)
    assert len(certs) == 1
    assert certs[0].verified and certs[0].target.is_zero()


def test_descent_upper_triangular():
    t2 = upper_triangular(2)
    fam = GeneratorFamily.single(SigmaDerivation.ordinary(inner_derivation(t2, t2.basis_vector(1))))
    certs = certify_theorem_16(t2, fam, 1)
    assert [c.verified for c in certs] == [True]
    c = certs[0]
    assert oracles.brute_force_power_vanishes(fam, c.V.basis, c.N, c.bound_l)


def test_descent_rejects_non_invariant_map():
    t2 = upper_triangular(2)
    # a linear map sending E12 to E11 does not keep the radical
    bad = LinearEndomap.from_images(t2, [t2.zero(), t2.basis_vector(0), t2.zero()])
    fam = GeneratorFamily.single(SigmaDerivation.ordinary(bad))
    with pytest.raises(HypothesisError):
        certify_theorem_16(t2, fam, 1)


def test_term_cap(monkeypatch):
    a, fam = grassmann_family(3)
    monkeypatch.setenv("ORELAB_TERM_CAP", "50")
    with pytest.raises(CapExceededError):
        certify_theorem_14(a, a.full(), fam, 2)
    with pytest.raises(CapExceededError):
        TermBudget(3).spend(4)
