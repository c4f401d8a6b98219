"""Small named algebras used throughout the examples and tests."""

from __future__ import annotations

from .algebra import AlgebraPresentation
from .linear import ONE


def matrix_unit_algebra(n: int, positions, name: str = "") -> AlgebraPresentation:
    """Span of matrix units ``E_ij`` for ``(i, j)`` in ``positions`` (1-based).

    The positions must be closed under ``E_ij E_jl = E_il``.
    """
    positions = list(positions)
    index = {p: k for k, p in enumerate(positions)}
    products = {}
    for a, (i, j) in enumerate(positions):
        for b, (k, l) in enumerate(positions):
            if j == k:
                if (i, l) not in index:
                    raise ValueError(f"E{i}{j} E{k}{l} leaves the span")
                products[(a, b)] = {index[(i, l)]: ONE}
    diag = [index[(i, i)] for i in range(1, n + 1) if (i, i) in index]
    unit = None
    if len(diag) == n:
        unit = [0] * len(positions)
        for d in diag:
            unit[d] = 1
    names = tuple(f"E{i}{j}" for i, j in positions)
    return AlgebraPresentation.from_products(len(positions), products, unit, name, names)


def matrix_algebra(n: int) -> AlgebraPresentation:
    return matrix_unit_algebra(n, [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)], f"M{n}")


def upper_triangular(n: int) -> AlgebraPresentation:
    """Upper-triangular ``n x n`` matrices, basis ``E_ij`` with ``i <= j`` row-major."""
    return matrix_unit_algebra(n, [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)], f"T{n}")


def strictly_upper_triangular(n: int) -> AlgebraPresentation:
    return matrix_unit_algebra(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], f"N{n}")


def diagonal_algebra(n: int) -> AlgebraPresentation:
    """``Q x ... x Q`` with componentwise product."""
    products = {(i, i): {i: ONE} for i in range(n)}
    return AlgebraPresentation.from_products(n, products, [1] * n, "Q" + "xQ" * (n - 1), tuple(f"u{i + 1}" for i in range(n)))


def rationals() -> AlgebraPresentation:
    return diagonal_algebra(1)


def truncated_polynomials(n: int, unital: bool = True) -> AlgebraPresentation:
    """``Q[x]/(x^n)`` on basis ``1, x, .., x^{n-1}``; without the unit, ``xQ[x]/(x^{n})``."""
    if unital:
        products = {(i, j): {i + j: ONE} for i in range(n) for j in range(n) if i + j < n}
        unit = [1] + [0] * (n - 1)
        names = ("1",) + tuple(f"x^{i}" if i > 1 else "x" for i in range(1, n))
        return AlgebraPresentation.from_products(n, products, unit, f"Q[x]/x^{n}", names)
    # basis x, .., x^{n-1}
    m = n - 1
    products = {(i, j): {i + j + 1: ONE} for i in range(m) for j in range(m) if i + j + 2 < n}
    names = tuple(f"x^{i + 1}" if i else "x" for i in range(m))
    return AlgebraPresentation.from_products(m, products, None, f"xQ[x]/x^{n}", names)


def dual_numbers() -> AlgebraPresentation:
    return truncated_polynomials(2)


def zero_algebra(n: int) -> AlgebraPresentation:
    """``Q^n`` with every product zero."""
    return AlgebraPresentation.from_products(n, {}, None, f"Z{n}", tuple(f"z{i + 1}" for i in range(n)))


def cyclic_group_algebra(n: int) -> AlgebraPresentation:
    """``Q[C_n]`` on basis ``g^0 .. g^{n-1}``."""
    products = {(i, j): {(i + j) % n: ONE} for i in range(n) for j in range(n)}
    unit = [1] + [0] * (n - 1)
    return AlgebraPresentation.from_products(n, products, unit, f"Q[C{n}]", tuple(f"g^{i}" for i in range(n)))


def direct_product(a: AlgebraPresentation, b: AlgebraPresentation) -> AlgebraPresentation:
    n = a.dim
    products = {}
    for (i, j), entry in a.table.items():
        products[(i, j)] = {k: c for k, c in entry}
    for (i, j), entry in b.table.items():
        products[(n + i, n + j)] = {n + k: c for k, c in entry}
    unit = None
    if a.unital and b.unital:
        unit = list(a.unit) + list(b.unit)
    names = tuple(f"({x},0)" for x in a.basis_names) + tuple(f"(0,{y})" for y in b.basis_names)
    return AlgebraPresentation.from_products(n + b.dim, products, unit, f"{a.name}x{b.name}", names)

