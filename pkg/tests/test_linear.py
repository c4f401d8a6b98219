from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orelab import linear as la
from orelab.errors import DimensionError

import oracles

small = st.integers(min_value=-4, max_value=4).map(Fraction)


def rows_strategy(max_rows=5, n=4):
    return st.lists(st.lists(small, min_size=n, max_size=n).map(tuple), min_size=0, max_size=max_rows)


def test_scalar_accepts_exact_inputs_only():
    assert la.scalar("3/4") == Fraction(3, 4)
    assert la.scalar(2) == Fraction(2)
    assert la.scalar(Fraction(-1, 3)) == Fraction(-1, 3)
    with pytest.raises(TypeError):
        la.scalar(0.5)
    with pytest.raises(TypeError):
        la.scalar(True)


def test_vector_ops_and_dimension_errors():
    u, v = la.vector([1, 2]), la.vector([3, "1/2"])
    assert la.add(u, v) == (4, Fraction(5, 2))
    assert la.sub(u, v) == (-2, Fraction(3, 2))
    assert la.scale(2, v) == (6, 1)
    with pytest.raises(DimensionError):
        la.add(u, la.vector([1, 2, 3]))


def test_mat_vec_uses_columns_as_images():
    m = la.matrix_from_columns([la.vector([0, 1]), la.vector([0, 0])])
    assert la.mat_vec(m, la.unit_vector(2, 0)) == (0, 1)
    assert la.mat_power(m, 2) == la.zero_matrix(2)


def test_inverse_and_singular():
    m = la.matrix([[2, 1], [1, 1]])
    inv = la.inverse(m)
    assert la.mat_mul(m, inv) == la.identity_matrix(2)
    assert la.inverse(la.matrix([[1, 2], [2, 4]])) is None


def test_solve_finds_coefficients_or_none():
    vs = [la.vector([1, 0, 1]), la.vector([0, 1, 1])]
    c = la.solve(vs, la.vector([2, 3, 5]))
    assert c == (2, 3)
    assert la.solve(vs, la.vector([0, 0, 1])) is None


def test_complement_basis():
    a = la.rref([[1, 0, 0]], 3)
    b = la.full_space(3)
    comp = la.complement_basis(a, b)
    assert len(comp) == 2
    assert la.subspace_sum(a, la.rref(comp, 3)).is_full()


@given(rows_strategy())
def test_rref_matches_sympy(rows):
    s = la.rref(rows, 4)
    assert s.basis == oracles.sympy_rref(list(rows), 4)
    assert s.dim == oracles.sympy_rank(list(rows))


@given(rows_strategy(max_rows=4))
def test_nullspace_annihilates_and_has_right_dimension(rows):
    rows = rows or [(Fraction(0),) * 4]
    ns = la.nullspace(rows, 4)
    assert ns.dim == 4 - oracles.sympy_rank(list(rows))
    for v in ns.basis:
        assert all(sum(r[j] * v[j] for j in range(4)) == 0 for r in rows)


@given(rows_strategy(), rows_strategy())
def test_intersection_and_sum_dimensions(r1, r2):
    a, b = la.rref(r1, 4), la.rref(r2, 4)
    s = la.subspace_sum(a, b)
    i = la.intersection(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert la.is_subspace(i, a) and la.is_subspace(i, b)
    assert la.is_subspace(a, s) and la.is_subspace(b, s)


@given(rows_strategy(), st.lists(small, min_size=4, max_size=4))
def test_coordinates_round_trip(rows, v):
    s = la.rref(rows, 4)
    v = tuple(v)
    c = s.coordinates(v)
    if oracles.in_span(list(rows), v):
        assert c is not None
        assert la.linear_combination(c, s.basis, 4) == v
    else:
        assert c is None


@given(st.lists(st.dictionaries(st.integers(0, 6), small, max_size=4), max_size=6))
def test_echelon_basis_rank_matches_dense(vecs):
    e = la.EchelonBasis()
    for v in vecs:
        e.add(v)
    dense = [tuple(v.get(i, Fraction(0)) for i in range(7)) for v in vecs]
    assert len(e) == oracles.sympy_rank(dense)
    for v in vecs:
        assert e.contains(v)
