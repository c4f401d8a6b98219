from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orelab import linear as la
from orelab.algebra import jacobson_radical, validate_presentation
from orelab.corpus import diagonal_algebra, matrix_algebra, upper_triangular, zero_algebra
from orelab.errors import GrassmannBoundaryError, HypothesisError, NotLocallyNilpotentError
from orelab.lnd import (
    Derivation,
    check_grassmann_surjective,
    check_prop_22,
    check_surjective,
    check_theorem_b,
    degree,
    exp_derivation,
    format_terms,
    grassmann_algebra,
    grassmann_preimage,
    grassmann_preimage_terms,
    grassmann_truncation,
    induced_presentation,
    kernel_filtration,
    preimage_truncation,
)
from orelab.maps import LinearEndomap, check_automorphism, check_sigma_derivation, inner_derivation


def test_grassmann_small_cases():
    a1, d1 = grassmann_algebra(1)
    assert a1.dim == 1 and not a1.table and d1.map.is_zero()
    t = grassmann_truncation(2)
    assert t.algebra.basis_names == ("e1", "e2", "e1e2")
    assert t.derivation(t.monomial((2,))) == t.monomial((1,))
    assert la.is_zero(t.derivation(t.monomial((1, 2))))
    t3 = grassmann_truncation(3)
    assert t3.derivation(t3.monomial((2, 3))) == t3.monomial((1, 3))


@pytest.mark.parametrize("g", range(1, 6))
def test_grassmann_is_valid(g):
    a, d = grassmann_algebra(g)
    assert a.dim == 2**g - 1
    assert not a.unital
    assert validate_presentation(a)
    assert check_sigma_derivation(a, d.as_sigma_derivation())


def test_grassmann_range():
    with pytest.raises(ValueError):
        grassmann_algebra(0)
    with pytest.raises(ValueError):
        grassmann_algebra(13)


def test_degree_examples():
    t = grassmann_truncation(3)
    d = t.derivation
    assert degree(d, t.monomial((1,))) == 0
    assert degree(d, t.monomial((3,))) == 2
    assert degree(d, t.monomial((1, 2))) == 0
    with pytest.raises(ValueError):
        degree(d, t.algebra.zero())


@given(st.lists(st.integers(-2, 2), min_size=15, max_size=15))
def test_degree_drops_under_d(ints):
    a, d = grassmann_algebra(4)
    x = la.vector(ints + [0] * (a.dim - 15))
    if la.is_zero(x) or la.is_zero(d(x)):
        return
    assert degree(d, d(x)) < degree(d, x)
    f = kernel_filtration(d)
    assert f.degree(x) == degree(d, x)


def test_filtration_examples():
    a = diagonal_algebra(1)
    assert [s.dim for s in kernel_filtration(Derivation.zero(a)).stages] == [1]
    t = grassmann_truncation(3)
    f = kernel_filtration(t.derivation)
    assert f.stages[-1].is_full()
    assert len(f) <= 3
    r0 = la.rref([t.monomial(m) for m in [(1,), (1, 2), (1, 2, 3)]], 7)
    assert la.is_subspace(r0, f[0])


@pytest.mark.parametrize("g", [2, 3, 4])
def test_filtration_shifts_down(g):
    _, d = grassmann_algebra(g)
    f = kernel_filtration(d)
    for n in range(len(f) - 1):
        assert la.is_subspace(d.map.image(f[n + 1]), f[n])


def test_non_nilpotent_rejected():
    a = diagonal_algebra(2)
    with pytest.raises(NotLocallyNilpotentError):
        kernel_filtration(Derivation(LinearEndomap.identity(a)))


def test_exp_examples():
    t = grassmann_truncation(2)
    e = exp_derivation(t.derivation)
    assert e(t.monomial((2,))) == la.add(t.monomial((2,)), t.monomial((1,)))
    assert check_automorphism(t.algebra, e)
    z = exp_derivation(Derivation.zero(t.algebra))
    assert z.is_identity()


def test_preimage_examples():
    t = grassmann_truncation(5)
    assert grassmann_preimage(5, (1,)) == t.monomial((2,))
    for n in range(1, 5):
        m = tuple(range(1, n + 1))
        want = tuple(range(1, n)) + (n + 1,)
        assert grassmann_preimage(5, m) == t.monomial(want)
    assert format_terms(grassmann_preimage_terms(5, (2, 3))) == "e2e4 - e1e5"


def test_preimage_boundary():
    with pytest.raises(GrassmannBoundaryError) as info:
        grassmann_preimage(3, (1, 3))
    assert info.value.required == 4
    with pytest.raises(GrassmannBoundaryError) as info:
        grassmann_preimage(4, (2, 3))
    assert info.value.required == 5
    assert preimage_truncation((2, 3)) == 5


@pytest.mark.parametrize("g", range(1, 7))
def test_preimages_exact_or_target_outside_image(g):
    t = grassmann_truncation(g)
    image = t.derivation.range()
    for m in t.subsets:
        if m[-1] >= g:
            continue
        if la.contains(image, t.monomial(m)):
            assert t.derivation(grassmann_preimage(g, m)) == t.monomial(m)
        else:
            with pytest.raises(GrassmannBoundaryError):
                grassmann_preimage(g, m)


def test_preimage_falls_back_to_solve_inside_truncation():
    # the recursion for e2e4 reaches e6, yet e2e4 has a preimage in E_5
    assert preimage_truncation((2, 4)) == 6
    t = grassmann_truncation(5)
    assert t.derivation(grassmann_preimage(5, (2, 4))) == t.monomial((2, 4))


def test_surjectivity_examples():
    a = zero_algebra(3)
    assert not check_surjective(Derivation.zero(a))
    jordan = LinearEndomap.from_rows(a, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    c = check_surjective(Derivation(jordan))
    assert not c and c.transcript["rank"] == 2
    for g in (1, 2, 3):
        assert check_grassmann_surjective(g)
    c = check_grassmann_surjective(4)
    assert not c and c.transcript["witness_monomial"] == "e2e3"


def test_prop_22_examples():
    qq = diagonal_algebra(2)
    c = check_prop_22(qq, Derivation.zero(qq))
    assert c and c.transcript["S_dim"] == 0
    a, d = grassmann_algebra(3)
    assert check_prop_22(a, d)
    t2 = upper_triangular(2)
    ad = Derivation.from_map(inner_derivation(t2, t2.basis_vector(1)))
    c = check_prop_22(t2, ad)
    assert c and c.transcript["constants_dim"] == 2


def test_prop_22_hypothesis_failures():
    m2 = matrix_algebra(2)
    with pytest.raises(HypothesisError):
        check_prop_22(m2, Derivation.zero(m2))
    t2 = upper_triangular(2)
    with pytest.raises(HypothesisError):
        check_prop_22(t2, Derivation(LinearEndomap.identity(t2)))


def test_induced_presentation_examples():
    qq = diagonal_algebra(2)
    ind = induced_presentation(qq, Derivation.zero(qq))
    assert ind.T == () and ind.base.algebra.dim == 2
    t = grassmann_truncation(2)
    ind = induced_presentation(t.algebra, t.derivation)
    assert ind.base.space == la.rref([t.monomial((1,)), t.monomial((1, 2))], 3)
    assert len(ind.T) == 1
    # delta_t(e1) = e2 e1 - e1 e2 = -2 e12
    delta = ind.family.deltas[0]
    e1 = ind.base.restrict(t.monomial((1,)))
    assert ind.base.embed(delta(e1)) == la.scale(-2, t.monomial((1, 2)))
    t2 = upper_triangular(2)
    ind = induced_presentation(t2, Derivation(inner_derivation(t2, t2.basis_vector(1))))
    assert len(ind.T) == 1


def test_induced_presentation_generation_failure():
    a = zero_algebra(3)
    jordan = Derivation(LinearEndomap.from_rows(a, [[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    with pytest.raises(HypothesisError):
        induced_presentation(a, jordan)


def test_radical_square_examples():
    qq = diagonal_algebra(2)
    with pytest.raises(HypothesisError):
        check_theorem_b(qq, Derivation.zero(qq))
    t = grassmann_truncation(2)
    c = check_theorem_b(t.algebra, t.derivation, surjective_on=t.restricted_targets())
    assert c, c.witness
    assert c.transcript["J_nilpotency_index"] == 3


CORPUS_LND = [
    (grassmann_algebra(g)[0], grassmann_algebra(g)[1]) for g in range(1, 5)
] + [
    (upper_triangular(2), Derivation(inner_derivation(upper_triangular(2), [0, 1, 0]))),
    (upper_triangular(3), Derivation(inner_derivation(upper_triangular(3), [0, 1, 0, 0, 1, 0]))),
    (matrix_algebra(2), Derivation(inner_derivation(matrix_algebra(2), [0, 1, 0, 0]))),
    (diagonal_algebra(2), Derivation.zero(diagonal_algebra(2))),
]


@pytest.mark.parametrize("a,d", CORPUS_LND, ids=lambda x: getattr(x, "name", ""))
def test_lnd_corpus_laws(a, d):
    assert check_sigma_derivation(a, d.as_sigma_derivation())
    e = exp_derivation(d)
    assert check_automorphism(a, e)
    assert la.mat_mul(e.matrix, exp_derivation(-d).matrix) == la.identity_matrix(a.dim)
    j = jacobson_radical(a).space
    assert la.is_subspace(d.map.image(j), j)


def test_from_map_checks_leibniz():
    t2 = upper_triangular(2)
    with pytest.raises(HypothesisError):
        Derivation.from_map(LinearEndomap.identity(t2))
    assert Derivation.from_rows(t2, [[0, 0, 0], [Fraction(-1), 0, 1], [0, 0, 0]])
