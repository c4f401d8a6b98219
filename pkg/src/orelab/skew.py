"""Arithmetic in free skew extensions and the nilpotency certificates built on it.

An element of ``R<T; G, D>`` is stored in left-coefficient normal form
``sum_w r_w w`` where ``w`` runs over words in the generator labels and each
coefficient ``r_w`` is a vector of the base algebra.  Products are normalised
with the commutation rule ``t r = sigma_t(r) t + delta_t(r)``, pushing
coefficients leftwards through a word one letter at a time, rightmost first.

Subspaces of the extension are held as :class:`SkewSpan` objects: finite
spanning sets flattened onto coordinates ``(word, basis index)``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linear as la
from .algebra import (
    AlgebraPresentation,
    Check,
    Ideal,
    ideal_generated_by,
    multiply,
    nilpotency_index,
    prime_radical_chain,
    relative_nilpotency_index,
    subspace_product_many,
    subspace_power,
    power_in_radical,
    wedderburn_radical,
    is_ideal,
)
from .errors import CapExceededError, HypothesisError
from .linear import Subspace, Vector
from .maps import GeneratorFamily, bold_V_sequence, check_strong_invariance, delta_nk_image

Word = tuple

DEFAULT_TERM_CAP = 10**6
TERM_CAP_ENV = "ORELAB_TERM_CAP"


def term_cap() -> int:
    raw = os.environ.get(TERM_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_TERM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{TERM_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{TERM_CAP_ENV} must be positive")
    return cap


class TermBudget:
    """Counts expanded terms and raises once the cap is passed."""

    def __init__(self, cap: int | None = None):
        self.cap = term_cap() if cap is None else cap
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.cap:
            raise CapExceededError(f"expansion exceeded the term cap of {self.cap}")


def word_key(w: Word) -> tuple:
    return (len(w), w)


def words_of_length(labels: Sequence[str], n: int) -> list[Word]:
    return [tuple(p) for p in itertools.product(labels, repeat=n)]


def words_up_to(labels: Sequence[str], n: int) -> list[Word]:
    out: list[Word] = []
    for j in range(n + 1):
        out.extend(words_of_length(labels, j))
    return out


# ---------------------------------------------------------------------------
# skew polynomials


class SkewPolynomial:
    """Finite sum ``sum_w r_w w`` with base-algebra coefficients on the left."""

    __slots__ = ("family", "terms")

    def __init__(self, family: GeneratorFamily, terms: dict | None = None):
        self.family = family
        dim = family.parent.dim
        clean = {}
        for w, r in (terms or {}).items():
            w = tuple(w)
            for t in w:
                if t not in family:
                    raise KeyError(f"unknown generator label {t!r}")
            if len(r) != dim:
                raise la.DimensionError(f"coefficient of length {len(r)} in a dim-{dim} algebra")
            if any(r):
                clean[w] = tuple(r)
        self.terms = clean

    @classmethod
    def zero(cls, family: GeneratorFamily) -> "SkewPolynomial":
        return cls(family)

    @classmethod
    def monomial(cls, family: GeneratorFamily, r: Sequence, word: Sequence[str] = ()) -> "SkewPolynomial":
        return cls(family, {tuple(word): la.vector(r)})

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.family.parent

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest word length present; -1 for zero."""
        return max((len(w) for w in self.terms), default=-1)

    def _check_family(self, other: "SkewPolynomial") -> None:
        if other.family is not self.family:
            raise ValueError("skew polynomials over different generator families")

    def __add__(self, other: "SkewPolynomial") -> "SkewPolynomial":
        self._check_family(other)
        out = dict(self.terms)
        for w, r in other.terms.items():
            out[w] = la.add(out[w], r) if w in out else r
        return SkewPolynomial(self.family, out)

    def __neg__(self) -> "SkewPolynomial":
        return SkewPolynomial(self.family, {w: la.neg(r) for w, r in self.terms.items()})

    def __sub__(self, other: "SkewPolynomial") -> "SkewPolynomial":
        return self + (-other)

    def scaled(self, c) -> "SkewPolynomial":
        return SkewPolynomial(self.family, {w: la.scale(c, r) for w, r in self.terms.items()})

    def __mul__(self, other: "SkewPolynomial") -> "SkewPolynomial":
        return multiply_skew(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewPolynomial):
            return NotImplemented
        return self.family is other.family and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def flat(self) -> dict:
        """Coordinates keyed by ``(len(word), word, basis index)``."""
        out = {}
        for w, r in self.terms.items():
            k = word_key(w)
            for i, c in enumerate(r):
                if c:
                    out[(k[0], k[1], i)] = c
        return out

    @classmethod
    def from_flat(cls, family: GeneratorFamily, flat: dict) -> "SkewPolynomial":
        dim = family.parent.dim
        terms: dict = {}
        for (_, w, i), c in flat.items():
            terms.setdefault(w, [la.ZERO] * dim)[i] = c
        return cls(family, {w: tuple(r) for w, r in terms.items()})

    def format(self) -> str:
        if not self.terms:
            return "0"
        a = self.algebra
        parts = []
        for w in sorted(self.terms, key=word_key):
            coeff = a.format(self.terms[w])
            word = "*".join(w)
            parts.append(f"({coeff})" + (f"*{word}" if word else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SkewPolynomial({self.format()})"


def push_left(fam: GeneratorFamily, t: str, r: Sequence) -> SkewPolynomial:
    """``t r`` rewritten as ``sigma_t(r) t + delta_t(r)``."""
    sd = fam[t]
    r = la.vector(r)
    return SkewPolynomial(fam, {(t,): sd.sigma(r), (): sd.delta(r)})


def push_word(fam: GeneratorFamily, word: Word, r: Vector, budget: TermBudget | None = None) -> dict:
    """Normal form of ``word * r`` as a map from words to coefficients."""
    current = {(): tuple(r)}
    for t in reversed(word):
        sd = fam[t]
        nxt: dict = {}
        for w, c in current.items():
            s = sd.sigma(c)
            if any(s):
                key = (t,) + w
                nxt[key] = la.add(nxt[key], s) if key in nxt else s
            d = sd.delta(c)
            if any(d):
                nxt[w] = la.add(nxt[w], d) if w in nxt else d
        if budget is not None:
            budget.spend(2 * len(current))
        current = nxt
        if not current:
            break
    return current


def multiply_skew(p: SkewPolynomial, q: SkewPolynomial, budget: TermBudget | None = None) -> SkewPolynomial:
    """Product in left-coefficient normal form.

    ``(r u)(s v) = r (u s) v``; ``u s`` is normalised by :func:`push_word`.
    """
    if p.family is not q.family:
        raise ValueError("skew polynomials over different generator families")
    fam = p.family
    a = fam.parent
    out: dict = {}
    for v, s in q.terms.items():
        pushed_cache: dict = {}
        for u, r in p.terms.items():
            pushed = pushed_cache.get(u)
            if pushed is None:
                pushed = pushed_cache[u] = push_word(fam, u, s, budget)
            for w, c in pushed.items():
                prod = multiply(a, r, c)
                if budget is not None:
                    budget.spend(1)
                if any(prod):
                    key = w + v
                    out[key] = la.add(out[key], prod) if key in out else prod
    return SkewPolynomial(fam, out)


def word_times(fam: GeneratorFamily, word: Word, p: SkewPolynomial, budget: TermBudget | None = None) -> SkewPolynomial:
    """Left multiplication by a bare word (no coefficient)."""
    out: dict = {}
    for u, r in p.terms.items():
        for w, c in push_word(fam, word, r, budget).items():
            key = w + u
            out[key] = la.add(out[key], c) if key in out else c
    return SkewPolynomial(fam, out)


def base_times(fam: GeneratorFamily, x: Vector, p: SkewPolynomial) -> SkewPolynomial:
    """Left multiplication by a base-algebra element."""
    a = fam.parent
    return SkewPolynomial(fam, {u: multiply(a, x, r) for u, r in p.terms.items()})


# ---------------------------------------------------------------------------
# subspaces of the extension


class SkewSpan:
    """Span of finitely many skew polynomials, flattened onto ``(word, index)``."""

    def __init__(self, family: GeneratorFamily, polys: Iterable[SkewPolynomial] = ()):
        self.family = family
        self._ech = la.EchelonBasis()
        for p in polys:
            self.add(p)

    def add(self, p: SkewPolynomial) -> bool:
        return self._ech.add(p.flat())

    def __contains__(self, p: SkewPolynomial) -> bool:
        return self._ech.contains(p.flat())

    def contains_span(self, other: "SkewSpan") -> bool:
        return all(self._ech.contains(r) for r in other._ech.rows())

    @property
    def dim(self) -> int:
        return len(self._ech)

    def is_zero(self) -> bool:
        return len(self._ech) == 0

    def basis(self) -> list[SkewPolynomial]:
        return [SkewPolynomial.from_flat(self.family, r) for r in self._ech.rows()]

    def words(self) -> set:
        return {k[1] for k in self._ech.keys()}

    def max_degree(self) -> int:
        return max((len(w) for w in self.words()), default=-1)

    def coefficient_space(self) -> Subspace:
        """Span of every coefficient appearing in any element of the span."""
        vecs = []
        for p in self.basis():
            vecs.extend(p.terms.values())
        return la.rref(vecs, self.family.parent.dim)

    def coefficients_in(self, target: Subspace) -> bool:
        return la.is_subspace(self.coefficient_space(), target)


def span_of_products(left: Sequence[SkewPolynomial], right: Sequence[SkewPolynomial], family: GeneratorFamily, budget: TermBudget | None = None) -> SkewSpan:
    out = SkewSpan(family)
    for p in left:
        for q in right:
            out.add(multiply_skew(p, q, budget))
    return out


def span_power(generators: Sequence[SkewPolynomial], l: int, family: GeneratorFamily, budget: TermBudget | None = None) -> tuple[SkewSpan, int | None]:
    """``X^l`` for ``X`` spanned by ``generators``.

    Returns the span and the first exponent at which the power vanished,
    or ``None`` when it is still nonzero at ``l``.
    """
    if l < 1:
        raise ValueError("powers start at 1")
    power = SkewSpan(family, generators)
    if power.is_zero():
        return power, 1
    for k in range(2, l + 1):
        power = span_of_products(power.basis(), list(generators), family, budget)
        if power.is_zero():
            return power, k
    return power, None


def truncated_span_generators(family: GeneratorFamily, v: Subspace, n_max: int) -> list[SkewPolynomial]:
    """Spanning set ``{x w}`` of ``sum_{i<=N} V T^i``."""
    return [SkewPolynomial(family, {w: x}) for w in words_up_to(family.labels, n_max) for x in v.basis]


# ---------------------------------------------------------------------------
# the product-inclusion formula


def enumerate_B(a: Sequence[int]) -> list[tuple]:
    """All ``b >= 0`` with ``b_1 + .. + b_k <= a_1 + .. + a_k`` for every ``k``, lexicographically."""
    a = tuple(int(x) for x in a)
    if any(x < 0 for x in a):
        raise ValueError("exponent vectors are nonnegative")
    prefix = list(itertools.accumulate(a))
    out: list[tuple] = []

    def rec(k: int, used: int, acc: tuple) -> None:
        if k == len(a):
            out.append(acc)
            return
        for b in range(prefix[k] - used + 1):
            rec(k + 1, used + b, acc + (b,))

    rec(0, 0, ())
    return out


def _lhs_span(v: Subspace, a: Sequence[int], fam: GeneratorFamily, budget: TermBudget | None) -> SkewSpan:
    labels = fam.labels
    current: list[SkewPolynomial] | None = None
    for ai in reversed(a):
        words = words_of_length(labels, ai)
        span = SkewSpan(fam)
        for x in v.basis:
            if current is None:
                tails = [SkewPolynomial(fam, {(): x})]
            else:
                tails = [base_times(fam, x, c) for c in current]
            for tail in tails:
                for w in words:
                    span.add(word_times(fam, w, tail, budget))
        current = span.basis()
    return SkewSpan(fam, current or [])


def product_inclusion_rhs(v: Subspace, a: Sequence[int], fam: GeneratorFamily, max_n: int | None = None) -> dict:
    """Coefficient spaces of the right-hand side, keyed by word length.

    For each ``b`` in ``B(a)`` the product
    ``Delta(a^_1, b_1)(V) Delta(a^_2 - b^_1, b_2)(V) ..`` is placed at word
    length ``s(a) - s(b)``; spaces landing at the same length are summed.
    """
    alg = fam.parent
    memo: dict = {}

    def dnk(n: int, k: int) -> Subspace:
        if (n, k) not in memo:
            memo[(n, k)] = delta_nk_image(v, n, k, fam, max_n)
        return memo[(n, k)]

    a = tuple(a)
    a_hat = list(itertools.accumulate(a))
    total = sum(a)
    by_length: dict = {}
    for b in enumerate_B(a):
        b_prev = 0
        factors = []
        for j, bj in enumerate(b):
            factors.append(dnk(a_hat[j] - b_prev, bj))
            b_prev += bj
        prod = subspace_product_many(alg, factors)
        length = total - sum(b)
        by_length.setdefault(length, []).append(prod)
    return {j: la.sum_all(spaces, alg.dim) for j, spaces in by_length.items()}


def verify_product_inclusion(v: Subspace, a: Sequence[int], fam: GeneratorFamily, max_n: int | None = None, budget: TermBudget | None = None) -> Check:
    """Check ``T^{a_1} V T^{a_2} V .. T^{a_m} V`` lies in the ``B(a)`` sum.

    The witness on failure is the first left-hand basis element outside.
    """
    a = tuple(int(x) for x in a)
    if not a:
        raise ValueError("exponent vector must be nonempty")
    if any(x < 0 for x in a):
        raise ValueError("exponents must be nonnegative")
    from .maps import DEFAULT_MAX_N

    cap = DEFAULT_MAX_N if max_n is None else max_n
    if sum(a) > cap:
        raise CapExceededError(f"s(a) = {sum(a)} exceeds the composition cap {cap}")
    budget = TermBudget() if budget is None else budget
    lhs = _lhs_span(v, a, fam, budget)
    rhs_spaces = product_inclusion_rhs(v, a, fam, max_n)
    rhs = SkewSpan(fam)
    for length, space in rhs_spaces.items():
        for w in words_of_length(fam.labels, length):
            for x in space.basis:
                rhs.add(SkewPolynomial(fam, {w: x}))
    transcript = {
        "a": list(a),
        "B_size": len(enumerate_B(a)),
        "lhs_dim": lhs.dim,
        "rhs_dim": rhs.dim,
        "rhs_coefficient_dims": {j: s.dim for j, s in sorted(rhs_spaces.items())},
    }
    for p in lhs.basis():
        if p not in rhs:
            return Check(False, p, transcript)
    return Check(True, None, transcript)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class NilpotencyCertificate:
    """Data witnessing that ``(sum_{i<=N} V T^i)^bound_l`` vanishes, or lands in ``target``.

    ``family_F`` pairs each index tuple with its subspace; ``target`` is the
    zero subspace for a full nilpotency certificate and the previous chain
    stage for a descent level.
    """

    kind: str
    V: Subspace
    N: int
    family_F: list
    ideal_I: Ideal
    s: int
    n: int
    bound_l: int
    verified: bool
    target: Subspace
    stage: int | None = None
    vanishing_exponent: int | None = None
    transcript: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.bound_l != 2 * self.n * self.s:
            raise ValueError("bound_l must equal 2 n s")

    def to_json(self) -> dict:
        from .serialize import subspace_to_json

        return {
            "kind": self.kind,
            "stage": self.stage,
            "N": self.N,
            "V": subspace_to_json(self.V),
            "family_F": [
                {"index": list(ks), "dim": sp.dim, "basis": subspace_to_json(sp)} for ks, sp in self.family_F
            ],
            "ideal_I": subspace_to_json(self.ideal_I.space),
            "ideal_dim": self.ideal_I.dim,
            "s": self.s,
            "n": self.n,
            "bound_l": self.bound_l,
            "target": subspace_to_json(self.target),
            "vanishing_exponent": self.vanishing_exponent,
            "verified": self.verified,
            "transcript": self.transcript,
        }


def smallest_radical_power(a: AlgebraPresentation) -> int:
    """Smallest ``n > 1`` with ``A^n`` inside the Wedderburn radical."""
    for n in range(2, a.dim + 2):
        if power_in_radical(a, n):
            return n
    raise HypothesisError(f"no power A^n with 1 < n <= {a.dim + 1} lies in the Wedderburn radical")


def certify_theorem_14(a: AlgebraPresentation, v: Subspace, fam: GeneratorFamily, N: int, budget: TermBudget | None = None) -> NilpotencyCertificate:
    """Constructive nilpotency bound for ``sum_{i<=N} V T^i`` when ``A^n`` is in the radical.

    Builds ``F = {V_k1 .. V_kn : k1 + .. + kn <= 2nN}``, takes ``I`` as the
    ideal generated by its union, ``s`` as the nilpotency index of ``I`` and
    checks by expansion that the ``2ns``-th power vanishes.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if fam.parent.dim != a.dim or v.ambient_dim != a.dim:
        raise la.DimensionError("instance dimensions disagree")
    n = smallest_radical_power(a)
    k_max = 2 * n * N
    vs = bold_V_sequence(v, k_max, fam)
    family_F = []
    for ks in itertools.product(range(k_max + 1), repeat=n):
        if sum(ks) <= k_max:
            family_F.append((ks, subspace_product_many(a, [vs[k] for k in ks])))
    union = la.sum_all((sp for _, sp in family_F), a.dim)
    ideal = ideal_generated_by(a, union)
    rad = wedderburn_radical(a).space
    if not la.is_subspace(ideal.space, rad):
        raise HypothesisError("the union of F is not inside the Wedderburn radical")
    s = nilpotency_index(ideal)
    if s is None:
        raise HypothesisError("the ideal generated by F is not nilpotent")
    bound = 2 * n * s
    budget = TermBudget() if budget is None else budget
    gens = truncated_span_generators(fam, v, N)
    power, vanished = span_power(gens, bound, fam, budget)
    zero = la.zero_subspace(a.dim)
    transcript = {
        "n_choice": "smallest n > 1 with A^n inside the Wedderburn radical",
        "bold_V_dims": [x.dim for x in vs],
        "F_size": len(family_F),
        "F_union_dim": union.dim,
        "ideal_dim": ideal.dim,
        "generators": list(fam.labels),
        "X_dim": SkewSpan(fam, gens).dim,
        "terms_used": budget.used,
    }
    return NilpotencyCertificate(
        kind="power_in_radical",
        V=v,
        N=N,
        family_F=family_F,
        ideal_I=ideal,
        s=s,
        n=n,
        bound_l=bound,
        verified=power.is_zero(),
        target=zero,
        vanishing_exponent=vanished,
        transcript=transcript,
    )


def _descent_level(a, v, fam, N, upper, lower, stage, budget):
    vs = bold_V_sequence(v, 2 * N, fam)
    for k, x in enumerate(vs):
        if not la.is_subspace(x, upper):
            raise HypothesisError(f"V_{k} leaves chain stage {stage}")
    union = la.sum_all(vs, a.dim)
    ideal = ideal_generated_by(a, union)
    if not la.is_subspace(ideal.space, upper):
        raise HypothesisError(f"generated ideal leaves chain stage {stage}")
    s = relative_nilpotency_index(a, ideal.space, lower)
    if s is None:
        raise HypothesisError(f"generated ideal is not nilpotent modulo stage {stage - 1}")
    gens = truncated_span_generators(fam, v, N)
    power, vanished = span_power(gens, 2 * s, fam, budget)
    coeffs = power.coefficient_space()
    ok = la.is_subspace(coeffs, lower)
    cert = NilpotencyCertificate(
        kind="prime_radical_descent",
        V=v,
        N=N,
        family_F=[((k,), x) for k, x in enumerate(vs)],
        ideal_I=ideal,
        s=s,
        n=1,
        bound_l=2 * s,
        verified=ok and (not lower.is_zero() or power.is_zero()),
        target=lower,
        stage=stage,
        vanishing_exponent=vanished,
        transcript={
            "bold_V_dims": [x.dim for x in vs],
            "ideal_dim": ideal.dim,
            "power_dim": power.dim,
            "W_dim": coeffs.dim,
            "m": max(power.max_degree(), 0),
        },
    )
    return cert, coeffs, max(power.max_degree(), 0)


def certify_theorem_16(a: AlgebraPresentation, fam: GeneratorFamily, N: int, v: Subspace | None = None, budget: TermBudget | None = None) -> list[NilpotencyCertificate]:
    """Descend the prime radical chain, one certificate per level.

    At level ``beta + 1`` the power ``(sum_{i<=N} V T^i)^{2s}`` is expanded
    and its coefficients are checked to lie in ``P_beta``; their span ``W``
    and the largest word length ``m`` seen feed the next level down.  The
    last level demands the power be exactly zero.  ``V`` defaults to the
    whole prime radical.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    chain = prime_radical_chain(a)
    inv = check_strong_invariance(chain, fam.deltas)
    if not inv:
        raise HypothesisError(f"prime radical is not strongly invariant (witness {inv.witness})")
    top = chain.top.space
    v = top if v is None else v
    if not la.is_subspace(v, top):
        raise HypothesisError("V is not inside the prime radical")
    budget = TermBudget() if budget is None else budget
    certs: list[NilpotencyCertificate] = []
    # start at the first stage containing V
    level = next(i for i, st in enumerate(chain.stages) if la.is_subspace(v, st.space))
    current_v, current_n = v, N
    while level >= 1:
        upper = chain.stages[level].space
        lower = chain.stages[level - 1].space
        cert, w, m = _descent_level(a, current_v, fam, current_n, upper, lower, level, budget)
        certs.append(cert)
        if not cert.verified:
            break
        current_v, current_n = w, m
        level -= 1
        if current_v.is_zero():
            break
    return certs


def descent_bound(certs: Sequence[NilpotencyCertificate]) -> int:
    """Exponent guaranteed by chaining the descent levels."""
    out = 1
    for c in certs:
        out *= c.bound_l
    return out


def recheck_certificate(a: AlgebraPresentation, fam: GeneratorFamily, cert: NilpotencyCertificate, budget: TermBudget | None = None) -> Check:
    """Re-verify a certificate's claims from its stored data alone."""
    ideal = cert.ideal_I.space
    if not is_ideal(a, ideal):
        return Check(False, "ideal_I is not an ideal")
    for ks, sp in cert.family_F:
        if not la.is_subspace(sp, ideal):
            return Check(False, ("F member outside I", tuple(ks)))
    if not la.is_subspace(subspace_power(a, ideal, cert.s), cert.target):
        return Check(False, "I^s is not inside the target")
    if cert.bound_l != 2 * cert.n * cert.s:
        return Check(False, "bound mismatch")
    gens = truncated_span_generators(fam, cert.V, cert.N)
    power, _ = span_power(gens, cert.bound_l, fam, budget or TermBudget())
    if cert.target.is_zero():
        ok = power.is_zero()
    else:
        ok = power.coefficients_in(cert.target)
    return Check(ok, None if ok else "expansion check failed")
