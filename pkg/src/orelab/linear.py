"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`, vectors are tuples of scalars and
matrices are tuples of row tuples.  A matrix ``M`` acts on coordinate column
vectors, so column ``j`` of ``M`` is the image of the ``j``-th basis vector.

Subspaces are stored by their reduced row-echelon basis, which is canonical:
two subspaces are equal exactly when their basis tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import DimensionError

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...], row-major

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3/4"``.  Floats are
    rejected because their binary expansion is rarely what was meant.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not an exact scalar; pass 'p/q' instead")
    try:
        return Fraction(x)
    except TypeError as exc:
        raise TypeError(f"cannot interpret {x!r} as a rational") from exc


def vector(xs: Iterable) -> Vector:
    return tuple(scalar(x) for x in xs)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def add(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"cannot add vectors of length {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"cannot subtract vectors of length {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Vector) -> Vector:
    c = scalar(c)
    if not c:
        return zero_vector(len(v))
    return tuple(c * a for a in v)


def neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def linear_combination(coeffs: Sequence, vectors: Sequence[Vector], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] += c * a
    return tuple(out)


# ---------------------------------------------------------------------------
# matrices


def matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vector(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise DimensionError("ragged matrix")
    return m


def identity_matrix(n: int) -> Matrix:
    return tuple(unit_vector(n, i) for i in range(n))


def zero_matrix(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple((ZERO,) * m for _ in range(n))


def matrix_from_columns(columns: Sequence[Vector], n: int | None = None) -> Matrix:
    if not columns:
        return zero_matrix(n or 0, 0)
    rows = len(columns[0])
    return tuple(tuple(col[i] for col in columns) for i in range(rows))


def columns(m: Matrix) -> list[Vector]:
    if not m:
        return []
    return [tuple(row[j] for row in m) for j in range(len(m[0]))]


def transpose(m: Matrix) -> Matrix:
    return tuple(columns(m))


def mat_vec(m: Matrix, v: Vector) -> Vector:
    if m and len(m[0]) != len(v):
        raise DimensionError(f"matrix with {len(m[0])} columns applied to vector of length {len(v)}")
    nz = [(j, a) for j, a in enumerate(v) if a]
    return tuple(sum((row[j] * a for j, a in nz), ZERO) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionError("inner dimensions differ")
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append(tuple(sum((x * col[k] for k, x in nz), ZERO) for col in bt))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise DimensionError("matrix shapes differ")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    if len(a) != len(b) or (a and len(a[0]) != len(b[0])):
        raise DimensionError("matrix shapes differ")
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = scalar(c)
    return tuple(tuple(c * x for x in r) for r in a)


def is_zero_matrix(m: Matrix) -> bool:
    return all(not any(r) for r in m)


def mat_power(m: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative matrix power")
    out = identity_matrix(len(m))
    for _ in range(k):
        out = mat_mul(m, out)
    return out


def rank(m: Matrix) -> int:
    return rref(m, len(m[0]) if m else 0).dim


def inverse(m: Matrix) -> Matrix | None:
    """Inverse of a square matrix, or ``None`` when it is singular."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionError("inverse of a non-square matrix")
    aug = [list(r) + list(e) for r, e in zip(m, identity_matrix(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(r[n:]) for r in aug)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held in reduced row-echelon form."""

    ambient_dim: int
    basis: tuple = ()
    pivots: tuple = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        return is_subspace(self, other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def coordinates(self, v: Vector) -> tuple | None:
        """Coefficients of ``v`` in this basis, or ``None`` if ``v`` is outside."""
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length differs from ambient dimension")
        coeffs = tuple(v[p] for p in self.pivots)
        if linear_combination(coeffs, self.basis, self.ambient_dim) != tuple(v):
            return None
        return coeffs


def _rref_rows(rows: list[list], n: int) -> tuple[list[list], list[int]]:
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        if p != 1:
            rows[r] = [x / p for x in rows[r]]
        prow = rows[r]
        nz = [(j, prow[j]) for j in range(col, n) if prow[j]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][col]
                if f:
                    row = rows[i]
                    for j, x in nz:
                        row[j] -= f * x
        pivots.append(col)
        r += 1
    return rows[:r], pivots


def rref(rows: Iterable[Sequence], ambient_dim: int | None = None) -> Subspace:
    """Canonical reduced row-echelon basis of the span of ``rows``.

    ``ambient_dim`` is required when ``rows`` may be empty.
    """
    rows = [list(vector(r)) for r in rows]
    if ambient_dim is None:
        if not rows:
            raise DimensionError("ambient dimension needed for an empty row list")
        ambient_dim = len(rows[0])
    for r in rows:
        if len(r) != ambient_dim:
            raise DimensionError(f"row of length {len(r)} in ambient dimension {ambient_dim}")
    basis, pivots = _rref_rows(rows, ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in basis), tuple(pivots))


span = rref


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, (), ())


def full_space(n: int) -> Subspace:
    return Subspace(n, identity_matrix(n), tuple(range(n)))


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if b.is_zero() or a == b:
        return a
    if a.is_zero():
        return b
    return rref(a.basis + b.basis, a.ambient_dim)


def sum_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    rows: list = []
    for s in spaces:
        if s.ambient_dim != ambient_dim:
            raise DimensionError("ambient dimensions differ")
        rows.extend(s.basis)
    return rref(rows, ambient_dim)


def reduce_vector(a: Subspace, v: Sequence) -> Vector:
    """Normal form of ``v`` modulo ``a``: zero exactly at ``a``'s pivots."""
    if len(v) != a.ambient_dim:
        raise DimensionError(f"vector of length {len(v)} in ambient dimension {a.ambient_dim}")
    out = list(v)
    for p, row in zip(a.pivots, a.basis):
        c = out[p]
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] -= c * x
    return tuple(out)


def contains(a: Subspace, v: Sequence) -> bool:
    return is_zero(reduce_vector(a, v))


def is_subspace(a: Subspace, b: Subspace) -> bool:
    """``a`` is contained in ``b``."""
    _check_ambient(a, b)
    return all(contains(b, v) for v in a.basis)


def nullspace(m: Matrix, ncols: int | None = None) -> Subspace:
    """All column vectors ``x`` with ``m x = 0``."""
    n = len(m[0]) if m else ncols
    if n is None:
        raise DimensionError("column count needed for an empty matrix")
    red = rref(m, n) if m else zero_subspace(n)
    free = [j for j in range(n) if j not in set(red.pivots)]
    sols = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for p, row in zip(red.pivots, red.basis):
            x[p] = -row[f]
        sols.append(x)
    return rref(sols, n)


def intersection(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.is_zero() or b.is_zero():
        return zero_subspace(a.ambient_dim)
    # solve sum x_i a_i = sum y_j b_j
    cols = list(a.basis) + [neg(v) for v in b.basis]
    ker = nullspace(matrix_from_columns(cols), len(cols))
    vecs = [linear_combination(k[: a.dim], a.basis, a.ambient_dim) for k in ker.basis]
    return rref(vecs, a.ambient_dim)


def image(m: Matrix, s: Subspace) -> Subspace:
    return rref((mat_vec(m, v) for v in s.basis), len(m))


def complement_basis(a: Subspace, b: Subspace) -> list[Vector]:
    """Vectors spanning a complement of ``a`` inside ``b``.

    Each basis vector of ``b`` is reduced modulo ``a``; the reduced vectors
    are row-reduced, which makes the choice deterministic.
    """
    if not is_subspace(a, b):
        raise DimensionError("first subspace is not contained in the second")
    reduced = rref((reduce_vector(a, v) for v in b.basis), a.ambient_dim)
    return list(reduced.basis)


def solve(vectors: Sequence[Vector], target: Sequence, n: int | None = None) -> tuple | None:
    """Coefficients ``c`` with ``sum c_i vectors[i] == target``, or ``None``."""
    n = len(target) if n is None else n
    if not vectors:
        return () if is_zero(target) else None
    aug = [list(col) for col in zip(*vectors)]  # n rows, len(vectors) columns
    for i, row in enumerate(aug):
        row.append(scalar(target[i]))
    k = len(vectors)
    rows, pivots = _rref_rows(aug, k + 1)
    if k in pivots:
        return None
    x = [ZERO] * k
    for p, row in zip(pivots, rows):
        x[p] = row[k]
    return tuple(x)


# ---------------------------------------------------------------------------
# sparse incremental elimination


class EchelonBasis:
    """Incrementally maintained echelon basis of sparse vectors.

    Vectors are dicts from sortable hashable keys to nonzero scalars.  Every
    stored row has coefficient 1 at its pivot, which is its smallest key, and
    no stored row has a nonzero entry at an earlier row's pivot.  Used where
    the coordinate set is large and only sparsely touched.
    """

    def __init__(self, vectors: Iterable[dict] = ()):
        self._rows: dict[Hashable, dict] = {}
        self._order: list[Hashable] = []
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c}
        rows = self._rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v
            p = min(hits)
            c = v[p]
            for k, a in rows[p].items():
                nv = v.get(k, ZERO) - c * a
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return whether it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        c = r[p]
        if c != 1:
            r = {k: a / c for k, a in r.items()}
        self._rows[p] = r
        self._order.append(p)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def rows(self) -> list[dict]:
        return [self._rows[p] for p in self._order]

    def keys(self) -> set:
        out: set = set()
        for r in self._rows.values():
            out.update(r)
        return out
