"""Automorphisms, sigma-derivations and the operator sets built from them.

For a finite list of generators ``t`` carrying pairs ``(sigma_t, delta_t)``,
``Delta(n, k)`` is the set of all ``n``-fold composites of these maps that use
exactly ``k`` derivations.  ``bold_Vk`` builds the stable submodules that
contain every ``Delta(n, k)(V)`` with ``n >= k``.

On a finite-dimensional algebra every automorphism is locally finite, so the
local-finiteness hypothesis on the automorphism family holds automatically
and is not checked separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import linear as la
from .algebra import AlgebraPresentation, Check, RadicalChain, multiply
from .errors import CapExceededError, DimensionError
from .linear import Matrix, Subspace, Vector

DEFAULT_MAX_N = 8


@dataclass(frozen=True, eq=False)
class LinearEndomap:
    parent: AlgebraPresentation
    matrix: Matrix

    def __post_init__(self):
        n = self.parent.dim
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise DimensionError(f"endomorphism of a dim-{n} algebra needs a {n}x{n} matrix")

    @classmethod
    def from_rows(cls, parent, rows) -> "LinearEndomap":
        return cls(parent, la.matrix(rows))

    @classmethod
    def from_images(cls, parent, images: Sequence[Vector]) -> "LinearEndomap":
        """Map sending basis vector ``j`` to ``images[j]``."""
        return cls(parent, la.matrix_from_columns([la.vector(v) for v in images]))

    @classmethod
    def identity(cls, parent) -> "LinearEndomap":
        return cls(parent, la.identity_matrix(parent.dim))

    @classmethod
    def zero(cls, parent) -> "LinearEndomap":
        return cls(parent, la.zero_matrix(parent.dim))

    def __call__(self, v: Vector) -> Vector:
        return la.mat_vec(self.matrix, v)

    def image(self, s: Subspace) -> Subspace:
        return la.image(self.matrix, s)

    def compose(self, other: "LinearEndomap") -> "LinearEndomap":
        """``self o other``."""
        return LinearEndomap(self.parent, la.mat_mul(self.matrix, other.matrix))

    __matmul__ = compose

    def __add__(self, other: "LinearEndomap") -> "LinearEndomap":
        return LinearEndomap(self.parent, la.mat_add(self.matrix, other.matrix))

    def __sub__(self, other: "LinearEndomap") -> "LinearEndomap":
        return LinearEndomap(self.parent, la.mat_sub(self.matrix, other.matrix))

    def __neg__(self) -> "LinearEndomap":
        return LinearEndomap(self.parent, la.mat_scale(-1, self.matrix))

    def scaled(self, c) -> "LinearEndomap":
        return LinearEndomap(self.parent, la.mat_scale(c, self.matrix))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearEndomap):
            return NotImplemented
        return self.parent.dim == other.parent.dim and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def power(self, k: int) -> "LinearEndomap":
        return LinearEndomap(self.parent, la.mat_power(self.matrix, k))

    def kernel(self) -> Subspace:
        return la.nullspace(self.matrix, self.parent.dim)

    def range(self) -> Subspace:
        return self.image(self.parent.full())

    def is_zero(self) -> bool:
        return la.is_zero_matrix(self.matrix)

    def nilpotency_index(self) -> int | None:
        """Least ``k`` with ``M^k = 0``, or ``None``."""
        if self.is_zero():
            return 1
        p = self.matrix
        for k in range(2, self.parent.dim + 1):
            p = la.mat_mul(self.matrix, p)
            if la.is_zero_matrix(p):
                return k
        return None


@dataclass(frozen=True, eq=False)
class Automorphism:
    map: LinearEndomap
    inverse: LinearEndomap

    @classmethod
    def from_map(cls, m: LinearEndomap) -> "Automorphism":
        inv = la.inverse(m.matrix)
        if inv is None:
            raise ValueError("map is not invertible")
        return cls(m, LinearEndomap(m.parent, inv))

    @classmethod
    def from_rows(cls, parent, rows) -> "Automorphism":
        return cls.from_map(LinearEndomap.from_rows(parent, rows))

    @classmethod
    def identity(cls, parent) -> "Automorphism":
        e = LinearEndomap.identity(parent)
        return cls(e, e)

    @property
    def parent(self) -> AlgebraPresentation:
        return self.map.parent

    @property
    def matrix(self) -> Matrix:
        return self.map.matrix

    def __call__(self, v: Vector) -> Vector:
        return self.map(v)

    def image(self, s: Subspace) -> Subspace:
        return self.map.image(s)

    def inverted(self) -> "Automorphism":
        return Automorphism(self.inverse, self.map)

    def is_identity(self) -> bool:
        return self.map.matrix == la.identity_matrix(self.parent.dim)


@dataclass(frozen=True, eq=False)
class SigmaDerivation:
    sigma: Automorphism
    delta: LinearEndomap

    @classmethod
    def ordinary(cls, delta: LinearEndomap) -> "SigmaDerivation":
        return cls(Automorphism.identity(delta.parent), delta)

    @property
    def parent(self) -> AlgebraPresentation:
        return self.delta.parent


@dataclass(frozen=True, eq=False)
class GeneratorFamily:
    """Ordered generators ``t`` with their ``(sigma_t, delta_t)``."""

    generators: tuple  # of (label, SigmaDerivation)
    algebra: AlgebraPresentation | None = None  # needed only when there are no generators

    def __post_init__(self):
        gens = tuple((str(t), sd) for t, sd in self.generators)
        object.__setattr__(self, "generators", gens)
        labels = [t for t, _ in gens]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate generator labels in {labels}")
        dims = {sd.parent.dim for _, sd in gens} | {sd.sigma.parent.dim for _, sd in gens}
        if self.algebra is not None:
            dims.add(self.algebra.dim)
        elif not gens:
            raise ValueError("an empty generator family needs its algebra")
        if len(dims) > 1:
            raise DimensionError("generators act on algebras of different dimension")
        object.__setattr__(self, "_index", {t: sd for t, sd in gens})

    @classmethod
    def single(cls, sd: SigmaDerivation, label: str = "x") -> "GeneratorFamily":
        return cls(((label, sd),))

    @classmethod
    def empty(cls, algebra: AlgebraPresentation) -> "GeneratorFamily":
        return cls((), algebra)

    @property
    def labels(self) -> tuple:
        return tuple(t for t, _ in self.generators)

    @property
    def sigmas(self) -> list[Automorphism]:
        return [sd.sigma for _, sd in self.generators]

    @property
    def deltas(self) -> list[LinearEndomap]:
        return [sd.delta for _, sd in self.generators]

    @property
    def parent(self) -> AlgebraPresentation:
        if self.algebra is not None:
            return self.algebra
        return self.generators[0][1].parent

    def __getitem__(self, label: str) -> SigmaDerivation:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown generator label {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.generators)


# ---------------------------------------------------------------------------
# constructors for common maps


def left_minus_right(a: AlgebraPresentation, x: Vector) -> LinearEndomap:
    cols = []
    for j in range(a.dim):
        e = a.basis_vector(j)
        cols.append(la.sub(multiply(a, x, e), multiply(a, e, x)))
    return LinearEndomap(a, la.matrix_from_columns(cols))


def inner_derivation(a: AlgebraPresentation, x: Vector) -> LinearEndomap:
    """``y -> x y - y x``."""
    return left_minus_right(a, la.vector(x))


def conjugation(a: AlgebraPresentation, u: Vector, u_inv: Vector) -> Automorphism:
    """``y -> u y u^{-1}`` for a unit ``u`` with inverse ``u_inv``."""
    u, u_inv = la.vector(u), la.vector(u_inv)
    if not a.unital or multiply(a, u, u_inv) != a.unit or multiply(a, u_inv, u) != a.unit:
        raise ValueError("u_inv is not a two-sided inverse of u")
    fwd = [multiply(a, multiply(a, u, a.basis_vector(j)), u_inv) for j in range(a.dim)]
    back = [multiply(a, multiply(a, u_inv, a.basis_vector(j)), u) for j in range(a.dim)]
    return Automorphism(LinearEndomap.from_images(a, fwd), LinearEndomap.from_images(a, back))


def twisted_inner(sigma: Automorphism) -> SigmaDerivation:
    """The sigma-derivation ``sigma - id``."""
    return SigmaDerivation(sigma, sigma.map - LinearEndomap.identity(sigma.parent))


# ---------------------------------------------------------------------------
# law checks


def check_automorphism(a: AlgebraPresentation, m: LinearEndomap | Automorphism) -> Check:
    """Invertible, multiplicative on basis pairs, and unit-preserving if unital.

    Witness: ``"singular"``, a basis pair ``(i, j)`` or ``"unit"``.
    """
    if isinstance(m, Automorphism):
        if la.mat_mul(m.map.matrix, m.inverse.matrix) != la.identity_matrix(a.dim):
            return Check(False, "inverse")
        m = m.map
    if m.parent.dim != a.dim:
        raise DimensionError("map and algebra dimensions differ")
    if la.inverse(m.matrix) is None:
        return Check(False, "singular")
    images = [m(a.basis_vector(i)) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            if m(a.basis_product(i, j)) != multiply(a, images[i], images[j]):
                return Check(False, (i, j))
    if a.unital and m(a.unit) != a.unit:
        return Check(False, "unit")
    return Check(True)


def check_sigma_derivation(a: AlgebraPresentation, sd: SigmaDerivation) -> Check:
    """Leibniz rule ``delta(xy) = delta(x) y + sigma(x) delta(y)`` on basis pairs."""
    if sd.parent.dim != a.dim:
        raise DimensionError("map and algebra dimensions differ")
    delta, sigma = sd.delta, sd.sigma
    d_img = [delta(a.basis_vector(i)) for i in range(a.dim)]
    s_img = [sigma(a.basis_vector(i)) for i in range(a.dim)]
    for i in range(a.dim):
        for j in range(a.dim):
            lhs = delta(a.basis_product(i, j))
            rhs = la.add(multiply(a, d_img[i], a.basis_vector(j)), multiply(a, s_img[i], d_img[j]))
            if lhs != rhs:
                return Check(False, (i, j))
    return Check(True)


def check_q_skew(sd: SigmaDerivation, q) -> bool:
    """``delta sigma = q sigma delta`` with ``1 + q + .. + q^n`` never zero.

    Over Q the partial geometric sums vanish only for ``q = -1``.
    """
    q = la.scalar(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    if q == -1:
        return False
    ds = la.mat_mul(sd.delta.matrix, sd.sigma.matrix)
    sdl = la.mat_mul(sd.sigma.matrix, sd.delta.matrix)
    return ds == la.mat_scale(q, sdl)


# ---------------------------------------------------------------------------
# stable submodules and Delta(n, k)


def stable_saturation(v: Subspace, group: Iterable[Automorphism]) -> Subspace:
    """Smallest subspace containing ``v`` and stable under each map and its inverse."""
    maps = []
    for g in group:
        maps.append(g.map.matrix)
        maps.append(g.inverse.matrix)
    current = v
    while True:
        imgs = [la.mat_vec(m, x) for m in maps for x in current.basis]
        grown = la.rref(current.basis + tuple(imgs), v.ambient_dim)
        if grown == current:
            return current
        current = grown


def _check_nk(n: int, k: int, max_n: int | None) -> None:
    if k < 0 or n < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        raise ValueError(f"Delta({n}, {k}) needs k <= n")
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if n > cap:
        raise CapExceededError(f"Delta({n}, {k}) exceeds the composition cap n <= {cap}")


def delta_nk_maps(n: int, k: int, fam: GeneratorFamily, max_n: int | None = None) -> Iterator[LinearEndomap]:
    """Every composite ``eta_1 o .. o eta_n`` with exactly ``k`` derivations.

    Composites are yielded with multiplicity, one per choice of factors.
    """
    _check_nk(n, k, max_n)
    parent = fam.parent
    sigmas = [s.map for s in fam.sigmas]
    deltas = fam.deltas
    for slots in itertools.combinations(range(n), k):
        slot_set = set(slots)
        pools = [deltas if i in slot_set else sigmas for i in range(n)]
        for factors in itertools.product(*pools):
            out = LinearEndomap.identity(parent)
            for f in factors:
                out = out.compose(f)
            yield out


def delta_nk_image(v: Subspace, n: int, k: int, fam: GeneratorFamily, max_n: int | None = None) -> Subspace:
    """Sum of ``phi(V)`` over every composite ``phi`` in ``Delta(n, k)``.

    Enumerates the composites factor by factor, innermost first, summing the
    images at the leaves.
    """
    _check_nk(n, k, max_n)
    if len(fam) == 0:
        return v if n == 0 else la.zero_subspace(v.ambient_dim)
    sigmas = [s.map.matrix for s in fam.sigmas]
    deltas = [d.matrix for d in fam.deltas]
    rows: list = []

    def walk(space: Subspace, remaining: int, ks: int) -> None:
        if space.is_zero():
            return
        if remaining == 0:
            rows.extend(space.basis)
            return
        if remaining > ks:
            for m in sigmas:
                walk(la.image(m, space), remaining - 1, ks)
        if ks > 0:
            for m in deltas:
                walk(la.image(m, space), remaining - 1, ks - 1)

    walk(v, n, k)
    return la.rref(rows, v.ambient_dim)


def delta_nk_image_recursive(v: Subspace, n: int, k: int, fam: GeneratorFamily, _memo=None) -> Subspace:
    """Same sum via ``Delta(n,k)(V) = sum sigma(Delta(n-1,k)(V)) + sum delta(Delta(n-1,k-1)(V))``."""
    memo = {} if _memo is None else _memo
    key = (n, k)
    if key in memo:
        return memo[key]
    if k < 0 or k > n:
        out = la.zero_subspace(v.ambient_dim)
    elif n == 0:
        out = v
    else:
        parts = []
        if n - 1 >= k:
            inner = delta_nk_image_recursive(v, n - 1, k, fam, memo)
            parts += [s.image(inner) for s in fam.sigmas]
        if k >= 1:
            inner = delta_nk_image_recursive(v, n - 1, k - 1, fam, memo)
            parts += [d.image(inner) for d in fam.deltas]
        out = la.sum_all(parts, v.ambient_dim)
    memo[key] = out
    return out


def bold_V_sequence(v: Subspace, k_max: int, fam: GeneratorFamily) -> list[Subspace]:
    """``[V_0, .., V_kmax]`` with ``V_0 = V(G)`` and ``V_k = (sum_delta delta(V_{k-1}))(G)``."""
    sigmas = fam.sigmas
    out = [stable_saturation(v, sigmas)]
    for _ in range(k_max):
        prev = out[-1]
        w = la.sum_all([d.image(prev) for d in fam.deltas], v.ambient_dim)
        out.append(stable_saturation(w, sigmas))
    return out


def bold_Vk(v: Subspace, k: int, fam: GeneratorFamily) -> Subspace:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return bold_V_sequence(v, k, fam)[k]


def check_strong_invariance(chain: RadicalChain, derivations: Sequence) -> Check:
    """Every derivation maps every chain stage into itself.

    Accepts ``SigmaDerivation`` or bare ``LinearEndomap`` entries.  The
    witness is ``(stage index, derivation index, basis vector)``.
    """
    for si, stage in enumerate(chain.stages):
        for di, d in enumerate(derivations):
            delta = d.delta if isinstance(d, SigmaDerivation) else d
            for x in stage.space.basis:
                if not la.contains(stage.space, delta(x)):
                    return Check(False, (si, di, x))
    return Check(True)
