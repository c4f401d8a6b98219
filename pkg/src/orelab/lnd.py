"""Locally nilpotent derivations.

Covers the kernel filtration ``R_n = ker d^{n+1}``, degrees, the exponential
automorphism, the truncated Grassmann algebra with its shift derivation
``d(e_{i+1}) = e_i``, the nil test on ``J(R) ∩ R^d ∩ d(R)`` and the skew
presentation of ``R`` over its ring of constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linear as la
from .algebra import (
    AlgebraPresentation,
    Check,
    Subalgebra,
    element_nilpotency_index,
    is_commutative_on,
    jacobson_radical,
    multiply,
    nilpotency_index,
    prime_radical,
    subalgebra_generated_by,
    subalgebra_presentation,
    subspace_product,
)
from .errors import GrassmannBoundaryError, HypothesisError, NotLocallyNilpotentError
from .linear import Subspace, Vector
from .maps import (
    Automorphism,
    GeneratorFamily,
    LinearEndomap,
    SigmaDerivation,
    check_sigma_derivation,
)

MAX_GRASSMANN_G = 12


@dataclass(frozen=True, eq=False)
class Derivation:
    """An ordinary derivation (``sigma = id``) given by its matrix."""

    map: LinearEndomap

    @classmethod
    def from_map(cls, m: LinearEndomap, check: bool = True) -> "Derivation":
        if check:
            c = check_sigma_derivation(m.parent, SigmaDerivation.ordinary(m))
            if not c:
                raise HypothesisError(f"map fails the Leibniz rule on basis pair {c.witness}")
        return cls(m)

    @classmethod
    def from_rows(cls, parent: AlgebraPresentation, rows, check: bool = True) -> "Derivation":
        return cls.from_map(LinearEndomap.from_rows(parent, rows), check)

    @classmethod
    def zero(cls, parent: AlgebraPresentation) -> "Derivation":
        return cls(LinearEndomap.zero(parent))

    @property
    def parent(self) -> AlgebraPresentation:
        return self.map.parent

    @property
    def matrix(self):
        return self.map.matrix

    def __call__(self, v) -> Vector:
        return self.map(la.vector(v))

    def __neg__(self) -> "Derivation":
        return Derivation(-self.map)

    def power(self, k: int) -> LinearEndomap:
        return self.map.power(k)

    def kernel(self) -> Subspace:
        return self.map.kernel()

    def range(self) -> Subspace:
        return self.map.range()

    def nilpotency_index(self) -> int | None:
        return self.map.nilpotency_index()

    def is_locally_nilpotent(self) -> bool:
        return self.nilpotency_index() is not None

    def as_sigma_derivation(self) -> SigmaDerivation:
        return SigmaDerivation.ordinary(self.map)


def _require_lnd(d: Derivation) -> int:
    idx = d.nilpotency_index()
    if idx is None:
        raise NotLocallyNilpotentError("derivation matrix is not nilpotent")
    return idx


@dataclass(frozen=True)
class Filtration:
    """``R_0 ⊆ R_1 ⊆ ..`` with ``R_n = ker d^{n+1}``, ending at the full space."""

    stages: tuple

    @property
    def invariants(self) -> Subspace:
        return self.stages[0]

    def __len__(self) -> int:
        return len(self.stages)

    def __getitem__(self, n: int) -> Subspace:
        if n >= len(self.stages):
            return self.stages[-1]
        return self.stages[n]

    def degree(self, a: Vector) -> int:
        if la.is_zero(a):
            raise ValueError("the zero element has no degree")
        for n, s in enumerate(self.stages):
            if la.contains(s, a):
                return n
        raise RuntimeError("filtration does not exhaust the space")


def kernel_filtration(d: Derivation) -> Filtration:
    idx = _require_lnd(d)
    n = d.parent.dim
    stages = []
    p = d.map
    for _ in range(max(idx, 1)):
        k = p.kernel()
        stages.append(k)
        if k.dim == n:
            break
        p = d.map.compose(p)
    return Filtration(tuple(stages))


def degree(d: Derivation, a) -> int:
    """Least ``n`` with ``d^{n+1}(a) = 0``."""
    a = la.vector(a)
    if la.is_zero(a):
        raise ValueError("the zero element has no degree")
    _require_lnd(d)
    n = 0
    x = d(a)
    while not la.is_zero(x):
        n += 1
        x = d(x)
    return n


def exp_derivation(d: Derivation) -> Automorphism:
    """``sum_j d^j / j!``, a finite sum; the inverse is ``exp(-d)``."""
    idx = _require_lnd(d)

    def series(m: LinearEndomap) -> LinearEndomap:
        out = LinearEndomap.identity(m.parent)
        p = LinearEndomap.identity(m.parent)
        for j in range(1, idx):
            p = m.compose(p)
            out = out + p.scaled(Fraction(1, math.factorial(j)))
        return out

    return Automorphism(series(d.map), series(-d.map))


# ---------------------------------------------------------------------------
# truncated Grassmann algebra


def _sorted_sign(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def monomial_name(indices) -> str:
    return "".join(f"e{i}" for i in indices)


class GrassmannTruncation:
    """Span of ``e_S`` for nonempty ``S ⊆ {1..g}``, ordered by size then lexicographically.

    ``e_S e_T`` is zero when ``S`` and ``T`` meet, otherwise the sign of the
    shuffle times ``e_{S ∪ T}``.
    """

    def __init__(self, g: int):
        if not isinstance(g, int) or isinstance(g, bool) or not 1 <= g <= MAX_GRASSMANN_G:
            raise ValueError(f"g must be an integer in 1..{MAX_GRASSMANN_G}")
        self.g = g
        self.subsets = tuple(s for k in range(1, g + 1) for s in combinations(range(1, g + 1), k))
        self.index = {s: i for i, s in enumerate(self.subsets)}
        self.dim = len(self.subsets)
        products = {}
        for i, s in enumerate(self.subsets):
            ss = set(s)
            for j, t in enumerate(self.subsets):
                if ss.isdisjoint(t):
                    joined = s + t
                    products[(i, j)] = {self.index[tuple(sorted(joined))]: la.scalar(_sorted_sign(joined))}
        names = tuple(monomial_name(s) for s in self.subsets)
        self.algebra = AlgebraPresentation.from_products(self.dim, products, None, f"E{g}", names)
        images = [self.vector(self.d_monomial(s)) for s in self.subsets]
        self.derivation = Derivation(LinearEndomap.from_images(self.algebra, images))

    def monomial(self, indices) -> Vector:
        key = tuple(indices)
        if list(key) != sorted(set(key)) or not key:
            raise ValueError(f"monomial indices must be nonempty and strictly increasing, got {key}")
        if key[-1] > self.g or key[0] < 1:
            raise GrassmannBoundaryError(f"e{key[-1]} is outside E{self.g}", required=key[-1])
        return la.unit_vector(self.dim, self.index[key])

    def vector(self, terms: dict) -> Vector:
        out = [la.ZERO] * self.dim
        for s, c in terms.items():
            if s[-1] > self.g:
                raise GrassmannBoundaryError(f"{monomial_name(s)} is outside E{self.g}", required=s[-1])
            out[self.index[s]] += c
        return tuple(out)

    def terms(self, v: Vector) -> dict:
        return {self.subsets[i]: c for i, c in enumerate(v) if c}

    @staticmethod
    def d_monomial(s: tuple) -> dict:
        """Leibniz expansion of ``d(e_S)``; lowering an index keeps the order."""
        out = {}
        for k, i in enumerate(s):
            if i == 1 or (k > 0 and s[k - 1] == i - 1):
                continue
            t = s[:k] + (i - 1,) + s[k + 1:]
            out[t] = out.get(t, 0) + 1
        return {t: la.scalar(c) for t, c in out.items() if c}

    def format(self, v: Vector) -> str:
        return format_terms(self.terms(v))

    def restricted_targets(self) -> Subspace:
        """Monomials whose top index is below ``g``."""
        rows = [la.unit_vector(self.dim, i) for i, s in enumerate(self.subsets) if s[-1] < self.g]
        return la.rref(rows, self.dim)


def format_terms(terms: dict) -> str:
    """Render ``{indices: coefficient}`` in the given order, e.g. ``e2e4 - e1e5``."""
    parts = []
    for s, c in terms.items():
        if not c:
            continue
        mag = abs(c)
        body = monomial_name(s) if mag == 1 else f"{mag}*{monomial_name(s)}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


@lru_cache(maxsize=None)
def grassmann_truncation(g: int) -> GrassmannTruncation:
    return GrassmannTruncation(g)


def grassmann_algebra(g: int) -> tuple[AlgebraPresentation, Derivation]:
    t = grassmann_truncation(g)
    return t.algebra, t.derivation


@lru_cache(maxsize=None)
def _preimage(m: tuple) -> tuple:
    """Lexicographic recursion for a preimage of ``e_m`` under ``d``.

    Start from ``m`` with its top index raised by one; every other term of
    its derivative lowers an earlier index, giving a lex-smaller monomial
    whose preimage is subtracted.  The sum of the non-top indices drops at
    each step, so the recursion terminates.  Returns ordered
    ``(terms, largest index used)``.
    """
    top = m[-1] + 1
    cand = m[:-1] + (top,)
    out = {cand: la.ONE}
    needed = top
    for k in range(len(m) - 1):
        i = m[k]
        if i == 1 or (k > 0 and m[k - 1] == i - 1):
            continue
        corr = m[:k] + (i - 1,) + m[k + 1:-1] + (top,)
        sub_terms, sub_needed = _preimage(corr)
        needed = max(needed, sub_needed)
        for s, c in sub_terms:
            out[s] = out.get(s, la.ZERO) - c
    return tuple((s, c) for s, c in out.items() if c), needed


def _check_monomial(indices) -> tuple:
    m = tuple(int(i) for i in indices)
    if not m or list(m) != sorted(set(m)) or m[0] < 1:
        raise ValueError(f"monomial indices must be nonempty, positive and strictly increasing, got {m}")
    return m


def preimage_truncation(indices) -> int:
    """Smallest ``g`` for which the recursive preimage of ``e_m`` fits in ``E_g``."""
    return _preimage(_check_monomial(indices))[1]


def grassmann_preimage_terms(g: int, indices) -> dict:
    m = _check_monomial(indices)
    if m[-1] > g:
        raise GrassmannBoundaryError(f"{monomial_name(m)} is not in E{g}", required=m[-1] + 1)
    if m[-1] == g:
        raise GrassmannBoundaryError(
            f"a preimage of {monomial_name(m)} needs e{g + 1}, outside E{g}", required=preimage_truncation(m)
        )
    terms, needed = _preimage(m)
    if needed <= g:
        return dict(terms)
    # the recursion left E_g; a preimage may still exist inside it
    t = grassmann_truncation(g)
    cols = [t.derivation(t.algebra.basis_vector(i)) for i in range(t.dim)]
    coeffs = la.solve(cols, t.monomial(m), t.dim)
    if coeffs is None:
        raise GrassmannBoundaryError(
            f"{monomial_name(m)} is not in d(E{g}); the recursive preimage uses e{needed}", required=needed
        )
    return {t.subsets[i]: c for i, c in enumerate(coeffs) if c}


def grassmann_preimage(g: int, indices) -> Vector:
    """``x`` in ``E_g`` with ``d(x) = e_m``, built by the lexicographic recursion.

    When the recursion reaches a generator beyond ``e_g`` an exact solve
    inside ``E_g`` is tried instead; if ``e_m`` is not in ``d(E_g)`` a
    :class:`GrassmannBoundaryError` is raised with ``required`` set to the
    truncation the recursion needs.
    """
    return grassmann_truncation(g).vector(grassmann_preimage_terms(g, indices))


def check_surjective(d: Derivation, targets: Subspace | None = None) -> Check:
    """Whether ``d`` maps onto ``targets`` (default: the whole algebra).

    The witness is a target basis vector outside the image.
    """
    n = d.parent.dim
    img = d.range()
    targets = la.full_space(n) if targets is None else targets
    transcript = {"rank": img.dim, "dim": n, "targets_dim": targets.dim, "full_target": targets.dim == n}
    for v in targets.basis:
        if not la.contains(img, v):
            return Check(False, v, transcript)
    return Check(True, None, transcript)


def check_grassmann_surjective(g: int) -> Check:
    """Surjectivity of the truncated shift onto monomials with top index below ``g``.

    Inside ``E_g`` this only holds for ``g <= 3``; from ``g = 4`` on some
    targets (first ``e2e3``) need generators past ``e_g``.
    """
    t = grassmann_truncation(g)
    c = check_surjective(t.derivation, t.restricted_targets())
    c.transcript["boundary"] = f"targets restricted to monomials with top index < {g}"
    if c.witness is not None:
        m = t.subsets[c.witness.index(la.ONE)]
        c.transcript["witness_monomial"] = monomial_name(m)
        c.transcript["required_g"] = preimage_truncation(m)
    return c


# ---------------------------------------------------------------------------
# constants and the nil test


def _derivation_hypotheses(a: AlgebraPresentation, d: Derivation) -> None:
    if d.parent.dim != a.dim:
        raise la.DimensionError("derivation and algebra dimensions differ")
    c = check_sigma_derivation(a, d.as_sigma_derivation())
    if not c:
        raise HypothesisError(f"map is not a derivation (basis pair {c.witness})")
    _require_lnd(d)


def constants_subalgebra(a: AlgebraPresentation, d: Derivation) -> Subalgebra:
    """``R^d`` presented on its own echelon basis."""
    return subalgebra_presentation(a, d.kernel(), f"{a.name}^d" if a.name else "R^d")


def check_prop_22(a: AlgebraPresentation, d: Derivation) -> Check:
    """``S = J(R) ∩ R^d ∩ d(R)`` is a nil ideal of ``R^d`` inside ``P(R^d)``.

    Needs ``R^d`` commutative and ``d`` locally nilpotent; otherwise raises
    :class:`HypothesisError`.  When ``d`` is onto, also checks
    ``J(R) ∩ R^d ⊆ P(R^d)``.  A ``False`` result would contradict the
    statement.
    """
    _derivation_hypotheses(a, d)
    r0 = d.kernel()
    if not is_commutative_on(a, r0):
        raise HypothesisError("the ring of constants is not commutative")
    j = jacobson_radical(a).space
    s = la.intersection(la.intersection(j, r0), d.range())
    sub = constants_subalgebra(a, d)
    p = sub.embed_subspace(prime_radical(sub.algebra).space)
    indices = [element_nilpotency_index(a, x) for x in s.basis]
    surjective = d.range().dim == a.dim
    transcript = {
        "constants_dim": r0.dim,
        "jacobson_dim": j.dim,
        "S_dim": s.dim,
        "S_basis": [list(map(str, x)) for x in s.basis],
        "element_nilpotency_indices": indices,
        "prime_radical_of_constants_dim": p.dim,
        "surjective": surjective,
    }
    for x, idx in zip(s.basis, indices):
        if idx is None:
            return Check(False, ("not nilpotent", x), transcript)
    for x in s.basis:
        for y in r0.basis:
            if not la.contains(s, multiply(a, x, y)) or not la.contains(s, multiply(a, y, x)):
                return Check(False, ("not an ideal of the constants", x, y), transcript)
    if not la.is_subspace(s, p):
        return Check(False, ("outside the prime radical of the constants", s), transcript)
    if surjective:
        jr = la.intersection(j, r0)
        if not la.is_subspace(jr, p):
            return Check(False, ("J ∩ R^d outside the prime radical of the constants", jr), transcript)
        transcript["J_cap_constants_dim"] = jr.dim
    return Check(True, None, transcript)


# ---------------------------------------------------------------------------
# the skew presentation over the constants


@dataclass(frozen=True, eq=False)
class InducedPresentation:
    """``R`` as a skew extension of ``R^d`` with trivial automorphisms.

    ``T`` holds elements of ``R_1`` completing ``R_0`` to ``R_1``; the family
    is over ``base.algebra`` with ``delta_t(r) = t r - r t``.
    """

    parent: AlgebraPresentation
    derivation: Derivation
    base: Subalgebra
    T: tuple
    family: GeneratorFamily
    filtration: Filtration
    transcript: dict = field(default_factory=dict)


def induced_presentation(a: AlgebraPresentation, d: Derivation) -> InducedPresentation:
    _derivation_hypotheses(a, d)
    filt = kernel_filtration(d)
    r0, r1 = filt[0], filt[1]
    if not is_commutative_on(a, r0):
        raise HypothesisError("the ring of constants is not commutative")
    gen = subalgebra_generated_by(a, r1)
    if gen.dim != a.dim:
        raise HypothesisError(f"ker d^2 generates a subalgebra of dim {gen.dim} < {a.dim}")
    base = constants_subalgebra(a, d)
    T = tuple(la.complement_basis(r0, r1))
    b = base.algebra
    gens = []
    for n, t in enumerate(T):
        images = []
        for x in r0.basis:
            c = la.sub(multiply(a, t, x), multiply(a, x, t))
            if not la.contains(r0, c):
                raise HypothesisError(f"t r - r t leaves the constants for t = {a.format(t)}")
            images.append(base.restrict(c))
        delta = LinearEndomap.from_images(b, images)
        sd = SigmaDerivation.ordinary(delta)
        chk = check_sigma_derivation(b, sd)
        if not chk:
            raise HypothesisError(f"t r - r t is not a derivation of the constants (pair {chk.witness})")
        gens.append((f"t{n + 1}", sd))
    fam = GeneratorFamily(tuple(gens), b)
    transcript = {
        "R0_dim": r0.dim,
        "R1_dim": r1.dim,
        "T": [a.format(t) for t in T],
        "filtration_dims": [s.dim for s in filt.stages],
    }
    return InducedPresentation(a, d, base, T, fam, filt, transcript)


def right_saturation(a: AlgebraPresentation, s: Subspace, elements) -> Subspace:
    """Smallest subspace containing ``s`` and closed under ``x -> x t`` for each ``t``."""
    current = s
    while True:
        imgs = [multiply(a, x, t) for x in current.basis for t in elements]
        grown = la.rref(current.basis + tuple(imgs), a.dim)
        if grown == current:
            return current
        current = grown


def check_theorem_b(a: AlgebraPresentation, d: Derivation, surjective_on: Subspace | None = None, certify_N: int | None = 1) -> Check:
    """``J(R)^2 ⊆ P(R^d)<T>*`` and nilpotency of ``J(R)`` for onto ``d``.

    ``surjective_on`` replaces the whole space as the surjectivity target,
    which is how Grassmann truncations are fed in.  With ``certify_N`` set the
    descent certificate is also run on the induced skew data.
    """
    _derivation_hypotheses(a, d)
    surj = check_surjective(d, surjective_on)
    if not surj:
        raise HypothesisError(f"d is not onto the requested targets (witness {surj.witness})")
    ind = induced_presentation(a, d)
    p_base = prime_radical(ind.base.algebra).space
    p = ind.base.embed_subspace(p_base)
    pt = right_saturation(a, p, ind.T)
    j = jacobson_radical(a).space
    spanning = [multiply(a, x, y) for x in j.basis for y in j.basis]
    witnesses = []
    for v in spanning:
        coeffs = la.solve(list(pt.basis), v, a.dim)
        if coeffs is None:
            return Check(False, ("J^2 product outside P<T>*", v), {"P_dim": p.dim, "PT_dim": pt.dim})
        witnesses.append([str(c) for c in coeffs])
    j2 = subspace_product(a, la.rref(j.basis, a.dim), la.rref(j.basis, a.dim))
    s = nilpotency_index(j, a)
    transcript = {
        "surjectivity": surj.transcript,
        "induced": ind.transcript,
        "P_dim": p.dim,
        "PT_dim": pt.dim,
        "J_dim": j.dim,
        "J2_dim": j2.dim,
        "J2_coordinates": witnesses,
        "J_nilpotency_index": s,
    }
    if s is None:
        return Check(False, "J is not nilpotent", transcript)
    if certify_N is not None and not p_base.is_zero():
        from .skew import certify_theorem_16, descent_bound

        certs = certify_theorem_16(ind.base.algebra, ind.family, certify_N)
        transcript["descent"] = [
            {"stage": c.stage, "s": c.s, "bound_l": c.bound_l, "verified": c.verified} for c in certs
        ]
        transcript["descent_bound"] = descent_bound(certs)
        if not all(c.verified for c in certs):
            return Check(False, "descent certificate failed", transcript)
    return Check(True, None, transcript)
