"""Finite-dimensional associative algebras over Q given by structure constants.

An algebra of dimension ``n`` has basis ``e_0 .. e_{n-1}`` and products
``e_i e_j = sum_k c[i][j][k] e_k``.  Only the nonzero products are stored.
Algebras need not have an identity.

The radical routines rely on the algebra being finite-dimensional over a
field of characteristic zero, where the largest nilpotent ideal, the prime
radical and the Jacobson radical all coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linear as la
from .errors import DimensionError, RadicalComputationError
from .linear import ONE, ZERO, Subspace, Vector


@dataclass(frozen=True)
class Check:
    """Outcome of a law or hypothesis check.

    ``witness`` names the first offending input when ``ok`` is false;
    ``transcript`` carries whatever the check computed along the way.
    """

    ok: bool
    witness: object = None
    transcript: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class AlgebraPresentation:
    dim: int
    table: Mapping  # (i, j) -> tuple of (k, c) with c != 0
    unital: bool = False
    unit: Vector | None = None
    name: str = ""
    basis_names: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("algebra dimension must be positive")
        if self.unital != (self.unit is not None):
            raise ValueError("unit vector must be given exactly when the algebra is unital")
        if self.unit is not None and len(self.unit) != self.dim:
            raise DimensionError("unit vector has the wrong length")
        if not self.basis_names:
            object.__setattr__(self, "basis_names", tuple(f"b{i}" for i in range(self.dim)))

    @classmethod
    def from_structure_constants(cls, sc, unit=None, name="", basis_names=()):
        """Build from a dense ``dim x dim x dim`` table."""
        n = len(sc)
        table = {}
        for i in range(n):
            if len(sc[i]) != n:
                raise DimensionError(f"structure constants row {i} has length {len(sc[i])}")
            for j in range(n):
                if len(sc[i][j]) != n:
                    raise DimensionError(f"structure constants entry ({i},{j}) has length {len(sc[i][j])}")
                entry = tuple((k, la.scalar(c)) for k, c in enumerate(sc[i][j]) if la.scalar(c))
                if entry:
                    table[(i, j)] = entry
        unit = None if unit is None else la.vector(unit)
        return cls(n, table, unit is not None, unit, name, tuple(basis_names))

    @classmethod
    def from_products(cls, dim, products: Mapping, unit=None, name="", basis_names=()):
        """Build from a mapping ``(i, j) -> vector`` listing the nonzero products."""
        table = {}
        for (i, j), v in products.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionError(f"product index {(i, j)} out of range")
            if isinstance(v, Mapping):
                entry = tuple(sorted((k, la.scalar(c)) for k, c in v.items() if la.scalar(c)))
            else:
                if len(v) != dim:
                    raise DimensionError(f"product {(i, j)} has length {len(v)}")
                entry = tuple((k, la.scalar(c)) for k, c in enumerate(v) if la.scalar(c))
            if entry:
                table[(i, j)] = entry
        unit = None if unit is None else la.vector(unit)
        return cls(dim, table, unit is not None, unit, name, tuple(basis_names))

    def structure_constants(self) -> list:
        """Dense table ``c[i][j][k]``."""
        sc = [[[ZERO] * self.dim for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), entry in self.table.items():
            for k, c in entry:
                sc[i][j][k] = c
        return sc

    def basis_product(self, i: int, j: int) -> Vector:
        out = [ZERO] * self.dim
        for k, c in self.table.get((i, j), ()):
            out[k] = c
        return tuple(out)

    def basis_vector(self, i: int) -> Vector:
        return la.unit_vector(self.dim, i)

    def zero(self) -> Vector:
        return la.zero_vector(self.dim)

    def full(self) -> Subspace:
        return la.full_space(self.dim)

    def format(self, v: Vector) -> str:
        terms = []
        for name, c in zip(self.basis_names, v):
            if not c:
                continue
            if c == 1:
                terms.append(f"+ {name}")
            elif c == -1:
                terms.append(f"- {name}")
            elif c > 0:
                terms.append(f"+ {c}*{name}")
            else:
                terms.append(f"- {-c}*{name}")
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        label = self.name or "algebra"
        return f"<AlgebraPresentation {label} dim={self.dim}{' unital' if self.unital else ''}>"


def multiply(a: AlgebraPresentation, x: Sequence, y: Sequence) -> Vector:
    """Bilinear product of two coordinate vectors."""
    if len(x) != a.dim or len(y) != a.dim:
        raise DimensionError(f"vectors of length {len(x)}, {len(y)} in algebra of dim {a.dim}")
    out = [ZERO] * a.dim
    ys = [(j, c) for j, c in enumerate(y) if c]
    table = a.table
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in ys:
            entry = table.get((i, j))
            if entry:
                f = xi * yj
                for k, c in entry:
                    out[k] += f * c
    return tuple(out)


def product_many(a: AlgebraPresentation, factors: Sequence[Vector]) -> Vector:
    out = factors[0]
    for f in factors[1:]:
        out = multiply(a, out, f)
    return out


def left_multiplication(a: AlgebraPresentation, x: Vector) -> la.Matrix:
    """Matrix of ``y -> x y``."""
    cols = [multiply(a, x, a.basis_vector(j)) for j in range(a.dim)]
    return la.matrix_from_columns(cols)


def right_multiplication(a: AlgebraPresentation, x: Vector) -> la.Matrix:
    """Matrix of ``y -> y x``."""
    cols = [multiply(a, a.basis_vector(j), x) for j in range(a.dim)]
    return la.matrix_from_columns(cols)


def validate_presentation(a: AlgebraPresentation) -> Check:
    """Associativity on all basis triples and, if unital, the unit law.

    The witness is a triple ``(i, j, k)`` for an associativity failure or
    ``("unit", i)`` for a unit-law failure.
    """
    n = a.dim
    for i in range(n):
        for j in range(n):
            eij = a.basis_product(i, j)
            for k in range(n):
                left = multiply(a, eij, a.basis_vector(k))
                right = multiply(a, a.basis_vector(i), a.basis_product(j, k))
                if left != right:
                    return Check(False, (i, j, k))
    if a.unital:
        for i in range(n):
            ei = a.basis_vector(i)
            if multiply(a, a.unit, ei) != ei or multiply(a, ei, a.unit) != ei:
                return Check(False, ("unit", i))
    return Check(True)


# ---------------------------------------------------------------------------
# subspaces, ideals and powers


@dataclass(frozen=True)
class Ideal:
    parent: AlgebraPresentation
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_zero(self) -> bool:
        return self.space.is_zero()

    def __contains__(self, v) -> bool:
        return la.contains(self.space, v)


def _check_space(a: AlgebraPresentation, s: Subspace) -> None:
    if s.ambient_dim != a.dim:
        raise DimensionError(f"subspace of Q^{s.ambient_dim} in algebra of dim {a.dim}")


def subspace_product(a: AlgebraPresentation, u: Subspace, v: Subspace) -> Subspace:
    """Span of all products ``x y`` with ``x`` in ``u`` and ``y`` in ``v``."""
    _check_space(a, u)
    _check_space(a, v)
    return la.rref((multiply(a, x, y) for x in u.basis for y in v.basis), a.dim)


def subspace_product_many(a: AlgebraPresentation, spaces: Sequence[Subspace]) -> Subspace:
    out = spaces[0]
    for s in spaces[1:]:
        if out.is_zero():
            return out
        out = subspace_product(a, out, s)
    return out


def subspace_power(a: AlgebraPresentation, s: Subspace, k: int) -> Subspace:
    if k < 1:
        raise ValueError("powers start at 1")
    out = s
    for _ in range(k - 1):
        if out.is_zero():
            break
        out = subspace_product(a, out, s)
    return out


def is_ideal(a: AlgebraPresentation, s: Subspace) -> bool:
    _check_space(a, s)
    for x in s.basis:
        for i in range(a.dim):
            e = a.basis_vector(i)
            if not la.contains(s, multiply(a, e, x)) or not la.contains(s, multiply(a, x, e)):
                return False
    return True


def is_subalgebra(a: AlgebraPresentation, s: Subspace) -> bool:
    _check_space(a, s)
    return all(la.contains(s, multiply(a, x, y)) for x in s.basis for y in s.basis)


def ideal_generated_by(a: AlgebraPresentation, s: Subspace) -> Ideal:
    """Smallest two-sided ideal containing ``s``.

    Saturates under left and right multiplication by basis elements, which
    in a non-unital algebra yields ``S + RS + SR + RSR``.
    """
    _check_space(a, s)
    current = s
    frontier = list(s.basis)
    while frontier:
        new = []
        for x in frontier:
            for i in range(a.dim):
                e = a.basis_vector(i)
                new.append(multiply(a, e, x))
                new.append(multiply(a, x, e))
        grown = la.rref(current.basis + tuple(new), a.dim)
        if grown == current:
            break
        frontier = [la.reduce_vector(current, v) for v in grown.basis]
        frontier = [v for v in frontier if not la.is_zero(v)]
        current = grown
    return Ideal(a, current)


def subalgebra_generated_by(a: AlgebraPresentation, s: Subspace) -> Subspace:
    """Smallest subspace containing ``s`` and closed under multiplication."""
    _check_space(a, s)
    current = s
    while True:
        grown = la.subspace_sum(current, subspace_product(a, current, current))
        if grown == current:
            return current
        current = grown


def nilpotency_index(ideal: Ideal | Subspace, parent: AlgebraPresentation | None = None) -> int | None:
    """Least ``s`` with ``I^s = 0``, or ``None`` if ``I`` is not nilpotent.

    Powers of a subspace shrink or stabilise, so ``dim + 1`` steps decide it.
    """
    if isinstance(ideal, Ideal):
        a, s = ideal.parent, ideal.space
    else:
        a, s = parent, ideal
    if s.is_zero():
        return 1
    power = s
    for k in range(2, a.dim + 2):
        power = subspace_product(a, power, s)
        if power.is_zero():
            return k
    return None


def relative_nilpotency_index(a: AlgebraPresentation, s: Subspace, target: Subspace, cap: int | None = None) -> int | None:
    """Least ``k >= 1`` with ``s^k`` contained in ``target``."""
    cap = a.dim + 1 if cap is None else cap
    power = s
    for k in range(1, cap + 1):
        if la.is_subspace(power, target):
            return k
        power = subspace_product(a, power, s)
    return None


def element_nilpotency_index(a: AlgebraPresentation, x: Vector) -> int | None:
    """Least ``k`` with ``x^k = 0``; ``None`` when ``x`` is not nilpotent."""
    if la.is_zero(x):
        return 1
    p = x
    for k in range(2, a.dim + 2):
        p = multiply(a, p, x)
        if la.is_zero(p):
            return k
    return None


def algebra_power(a: AlgebraPresentation, n: int) -> Subspace:
    """Span of all ``n``-fold products of basis elements."""
    return subspace_power(a, a.full(), n)


def is_commutative_on(a: AlgebraPresentation, s: Subspace) -> bool:
    _check_space(a, s)
    b = s.basis
    for i, x in enumerate(b):
        for y in b[i + 1:]:
            if multiply(a, x, y) != multiply(a, y, x):
                return False
    return True


# ---------------------------------------------------------------------------
# quotients and subalgebras


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    """``A / I`` presented on the complement spanned by non-pivot basis vectors."""

    parent: AlgebraPresentation
    ideal: Subspace
    algebra: AlgebraPresentation | None  # None when I is everything
    complement: tuple  # indices of parent basis vectors kept

    def project(self, v: Vector) -> Vector:
        r = la.reduce_vector(self.ideal, v)
        return tuple(r[i] for i in self.complement)

    def lift(self, w: Vector) -> Vector:
        out = [ZERO] * self.parent.dim
        for i, c in zip(self.complement, w):
            out[i] = c
        return tuple(out)

    def lift_subspace(self, s: Subspace) -> Subspace:
        """Preimage of ``s`` under the projection."""
        return la.rref(tuple(self.lift(w) for w in s.basis) + self.ideal.basis, self.parent.dim)


def quotient(a: AlgebraPresentation, ideal: Ideal | Subspace) -> QuotientAlgebra:
    space = ideal.space if isinstance(ideal, Ideal) else ideal
    _check_space(a, space)
    pivots = set(space.pivots)
    keep = tuple(i for i in range(a.dim) if i not in pivots)
    if not keep:
        return QuotientAlgebra(a, space, None, ())
    q = QuotientAlgebra(a, space, None, keep)
    products = {}
    for ii, i in enumerate(keep):
        for jj, j in enumerate(keep):
            w = q.project(a.basis_product(i, j))
            if not la.is_zero(w):
                products[(ii, jj)] = w
    unit = q.project(a.unit) if a.unital else None
    names = tuple(a.basis_names[i] for i in keep)
    alg = AlgebraPresentation.from_products(len(keep), products, unit, f"{a.name}/I" if a.name else "", names)
    check = validate_presentation(alg)
    if not check:
        raise RadicalComputationError(f"quotient by a non-ideal (witness {check.witness})")
    return QuotientAlgebra(a, space, alg, keep)


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """A subalgebra ``S`` of ``A`` re-presented on its echelon basis."""

    parent: AlgebraPresentation
    space: Subspace
    algebra: AlgebraPresentation

    def embed(self, w: Vector) -> Vector:
        return la.linear_combination(w, self.space.basis, self.parent.dim)

    def embed_subspace(self, s: Subspace) -> Subspace:
        return la.rref((self.embed(w) for w in s.basis), self.parent.dim)

    def restrict(self, v: Vector) -> Vector:
        c = self.space.coordinates(v)
        if c is None:
            raise ValueError("vector lies outside the subalgebra")
        return c


def subalgebra_presentation(a: AlgebraPresentation, s: Subspace, name: str = "") -> Subalgebra:
    _check_space(a, s)
    if s.is_zero():
        raise DimensionError("the zero subspace has no presentation")
    if not is_subalgebra(a, s):
        raise ValueError("subspace is not closed under multiplication")
    products = {}
    for i, x in enumerate(s.basis):
        for j, y in enumerate(s.basis):
            c = s.coordinates(multiply(a, x, y))
            if any(c):
                products[(i, j)] = c
    unit = None
    if a.unital and la.contains(s, a.unit):
        unit = s.coordinates(a.unit)
    names = tuple(a.format(v) for v in s.basis)
    alg = AlgebraPresentation.from_products(s.dim, products, unit, name, names)
    return Subalgebra(a, s, alg)


# ---------------------------------------------------------------------------
# radicals


@dataclass(frozen=True)
class RadicalChain:
    """Ascending chain ``0 = P_0 < P_1 < ... < P_gamma = P(R)``.

    Stages are strictly increasing; the chain has stabilised at the last
    stage, whose successor would equal it.  ``stabilization_index`` is gamma.
    """

    stages: tuple

    @property
    def stabilization_index(self) -> int:
        return len(self.stages) - 1

    @property
    def top(self) -> Ideal:
        return self.stages[-1]


def _trace_form_radical(a: AlgebraPresentation) -> Subspace:
    n = a.dim
    # trace of left multiplication by e_k
    tau = [ZERO] * n
    for (k, i), entry in a.table.items():
        for kk, c in entry:
            if kk == i:
                tau[k] += c
    rows = [tuple(tau)]
    # Tr(L_{x e_j}) = sum_i x_i sum_k c[i][j][k] tau_k
    for j in range(n):
        row = [ZERO] * n
        for i in range(n):
            for k, c in a.table.get((i, j), ()):
                row[i] += c * tau[k]
        rows.append(tuple(row))
    return la.nullspace(rows, n)


def wedderburn_radical(a: AlgebraPresentation) -> Ideal:
    """Largest nilpotent ideal, via the trace form on the unital hull.

    ``x`` is in the radical iff ``Tr(L_{x y}) = 0`` for every ``y`` in
    ``A + Q*1``.  The candidate is re-checked to be a nilpotent ideal.
    """
    rad = _trace_form_radical(a)
    if not is_ideal(a, rad):
        raise RadicalComputationError("trace-form radical is not an ideal")
    if nilpotency_index(rad, a) is None:
        raise RadicalComputationError("trace-form radical is not nilpotent")
    return Ideal(a, rad)


def jacobson_radical(a: AlgebraPresentation) -> Ideal:
    """Jacobson radical; equals the Wedderburn radical in finite dimension."""
    return wedderburn_radical(a)


def prime_radical_chain(a: AlgebraPresentation) -> RadicalChain:
    """Build ``P_{k+1}`` as the preimage of the radical of ``A / P_k`` until it stops growing."""
    stages = [Ideal(a, la.zero_subspace(a.dim))]
    for _ in range(a.dim + 1):
        current = stages[-1]
        q = quotient(a, current)
        if q.algebra is None:
            break
        rad = wedderburn_radical(q.algebra)
        if rad.is_zero():
            break
        stages.append(Ideal(a, q.lift_subspace(rad.space)))
    return RadicalChain(tuple(stages))


def prime_radical(a: AlgebraPresentation) -> Ideal:
    return prime_radical_chain(a).top


def power_in_radical(a: AlgebraPresentation, n: int) -> bool:
    """Whether ``A^n`` lies inside the Wedderburn radical."""
    if n < 1:
        raise ValueError("n must be positive")
    return la.is_subspace(algebra_power(a, n), wedderburn_radical(a).space)


def quasi_inverse(a: AlgebraPresentation, z: Vector) -> Vector | None:
    """``b`` with ``z + b = z b = b z``, or ``None`` if ``z`` is not quasi-regular."""
    n = a.dim
    lz = left_multiplication(a, z)
    rz = right_multiplication(a, z)
    eye = la.identity_matrix(n)
    lm = la.mat_sub(lz, eye)
    rm = la.mat_sub(rz, eye)
    system = [tuple(r) for r in lm] + [tuple(r) for r in rm]
    cols = la.columns(system)
    return la.solve(cols, tuple(z) + tuple(z))


def geometric_quasi_inverse(a: AlgebraPresentation, z: Vector) -> Vector:
    """``-(z + z^2 + ...)`` for a nilpotent ``z``."""
    if element_nilpotency_index(a, z) is None:
        raise ValueError("element is not nilpotent")
    out = la.zero_vector(a.dim)
    p = tuple(z)
    while not la.is_zero(p):
        out = la.sub(out, p)
        p = multiply(a, p, z)
    return out
