"""JSON encoding of algebras, maps, instances and certificates.

Rationals are written as strings (``"3/4"``, ``"-2"``) and never as floats.
Every decoder reports the failing field as a dotted path.

Instance layout::

    {
      "algebra":    {"dim": 3, "products": [[0, 1, ["0", "0", "1"]], ...],
                     "unit": [...]}            # or "sc": dense table
                    | {"builtin": "grassmann", "g": 2},
      "generators": [{"label": "x", "sigma": "identity" | {"matrix": rows},
                      "delta": {"matrix": rows} | {"inner": vector} | "grassmann"}],
      "derivation": {"matrix": rows} | "grassmann",     # optional
      "V": [vector, ...] | "full",                       # optional, default full
      "N": 1                                             # optional
    }

Matrices are lists of rows; column ``j`` is the image of the ``j``-th basis vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import corpus
from . import linear as la
from .algebra import AlgebraPresentation, Ideal
from .errors import OrelabError
from .linear import Subspace
from .maps import Automorphism, GeneratorFamily, LinearEndomap, SigmaDerivation, inner_derivation


class ParseError(OrelabError, ValueError):
    """Malformed instance data; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


def q(x: Fraction) -> str:
    return str(x)


def vector_to_json(v) -> list:
    return [q(c) for c in v]


def matrix_to_json(m) -> list:
    return [vector_to_json(r) for r in m]


def subspace_to_json(s: Subspace) -> list:
    return [vector_to_json(b) for b in s.basis]


def _scalar(x, where: str) -> Fraction:
    try:
        return la.scalar(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not an exact rational ({exc})", where) from None


def _vector(data, n: int | None, where: str) -> tuple:
    if not isinstance(data, list):
        raise ParseError("expected a list of rationals", where)
    if n is not None and len(data) != n:
        raise ParseError(f"expected length {n}, got {len(data)}", where)
    return tuple(_scalar(x, f"{where}[{i}]") for i, x in enumerate(data))


def _matrix(data, n: int, where: str) -> tuple:
    if not isinstance(data, list) or len(data) != n:
        raise ParseError(f"expected {n} rows", where)
    return tuple(_vector(r, n, f"{where}[{i}]") for i, r in enumerate(data))


def _int(data, where: str, minimum: int | None = None) -> int:
    if not isinstance(data, int) or isinstance(data, bool):
        raise ParseError("expected an integer", where)
    if minimum is not None and data < minimum:
        raise ParseError(f"must be at least {minimum}", where)
    return data


# ---------------------------------------------------------------------------
# algebras

BUILTINS = {
    "grassmann": ("g", None),
    "upper_triangular": ("n", corpus.upper_triangular),
    "strictly_upper_triangular": ("n", corpus.strictly_upper_triangular),
    "matrix": ("n", corpus.matrix_algebra),
    "diagonal": ("n", corpus.diagonal_algebra),
    "truncated_polynomials": ("n", corpus.truncated_polynomials),
    "zero": ("n", corpus.zero_algebra),
    "cyclic_group": ("n", corpus.cyclic_group_algebra),
}


def algebra_to_json(a: AlgebraPresentation) -> dict:
    out = {"dim": a.dim, "name": a.name, "basis_names": list(a.basis_names)}
    out["products"] = [
        [i, j, vector_to_json(a.basis_product(i, j))] for (i, j) in sorted(a.table)
    ]
    if a.unital:
        out["unit"] = vector_to_json(a.unit)
    return out


def algebra_from_json(data, where: str = "algebra") -> AlgebraPresentation:
    if not isinstance(data, dict):
        raise ParseError("expected an object", where)
    if "builtin" in data:
        kind = data["builtin"]
        if kind not in BUILTINS:
            raise ParseError(f"unknown builtin {kind!r}; choose from {sorted(BUILTINS)}", f"{where}.builtin")
        key, ctor = BUILTINS[kind]
        size = _int(data.get(key), f"{where}.{key}", 1)
        if kind == "grassmann":
            from .lnd import MAX_GRASSMANN_G, grassmann_algebra

            if size > MAX_GRASSMANN_G:
                raise ParseError(f"must be at most {MAX_GRASSMANN_G}", f"{where}.g")
            return grassmann_algebra(size)[0]
        return ctor(size)
    dim = _int(data.get("dim"), f"{where}.dim", 1)
    unit = None
    if data.get("unit") is not None:
        unit = _vector(data["unit"], dim, f"{where}.unit")
    name = str(data.get("name", ""))
    names = data.get("basis_names") or ()
    if names and len(names) != dim:
        raise ParseError(f"expected {dim} names", f"{where}.basis_names")
    if "sc" in data:
        sc = data["sc"]
        if not isinstance(sc, list) or len(sc) != dim:
            raise ParseError(f"expected a {dim} x {dim} x {dim} table", f"{where}.sc")
        table = [
            [_vector(sc[i][j] if isinstance(sc[i], list) and j < len(sc[i]) else None, dim, f"{where}.sc[{i}][{j}]") for j in range(dim)]
            for i in range(dim)
        ]
        return AlgebraPresentation.from_structure_constants(table, unit, name, tuple(names))
    products = {}
    for n, entry in enumerate(data.get("products", [])):
        at = f"{where}.products[{n}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise ParseError("expected [i, j, vector]", at)
        i = _int(entry[0], f"{at}[0]", 0)
        j = _int(entry[1], f"{at}[1]", 0)
        if i >= dim or j >= dim:
            raise ParseError(f"index out of range for dim {dim}", at)
        if (i, j) in products:
            raise ParseError(f"duplicate product ({i}, {j})", at)
        products[(i, j)] = _vector(entry[2], dim, f"{at}[2]")
    return AlgebraPresentation.from_products(dim, products, unit, name, tuple(names))


# ---------------------------------------------------------------------------
# maps


def map_to_json(m: LinearEndomap) -> dict:
    return {"matrix": matrix_to_json(m.matrix)}


def map_from_json(data, a: AlgebraPresentation, where: str) -> LinearEndomap:
    if data == "zero":
        return LinearEndomap.zero(a)
    if data == "identity":
        return LinearEndomap.identity(a)
    if data == "grassmann":
        return LinearEndomap(a, _grassmann_derivation(a, where).matrix)
    if isinstance(data, dict) and "inner" in data:
        return inner_derivation(a, _vector(data["inner"], a.dim, f"{where}.inner"))
    if not isinstance(data, dict) or "matrix" not in data:
        raise ParseError('expected {"matrix": rows}, {"inner": vector}, "zero", "identity" or "grassmann"', where)
    return LinearEndomap(a, _matrix(data["matrix"], a.dim, f"{where}.matrix"))


def _grassmann_derivation(a: AlgebraPresentation, where: str):
    from .lnd import grassmann_algebra

    g = a.dim.bit_length()
    if a.dim != 2**g - 1 or not a.name.startswith("E"):
        raise ParseError("the grassmann derivation needs a grassmann builtin algebra", where)
    return grassmann_algebra(g)[1]


def automorphism_from_json(data, a: AlgebraPresentation, where: str) -> Automorphism:
    if data == "identity" or data is None:
        return Automorphism.identity(a)
    m = map_from_json(data, a, where)
    if isinstance(data, dict) and "inverse" in data:
        inv = LinearEndomap(a, _matrix(data["inverse"], a.dim, f"{where}.inverse"))
        return Automorphism(m, inv)
    try:
        return Automorphism.from_map(m)
    except ValueError:
        raise ParseError("matrix is singular", where) from None


def automorphism_to_json(s: Automorphism):
    if s.is_identity():
        return "identity"
    return {"matrix": matrix_to_json(s.matrix), "inverse": matrix_to_json(s.inverse.matrix)}


def generators_from_json(data, a: AlgebraPresentation, where: str = "generators") -> GeneratorFamily:
    if data is None:
        return GeneratorFamily.empty(a)
    if not isinstance(data, list):
        raise ParseError("expected a list of generators", where)
    gens = []
    for n, g in enumerate(data):
        at = f"{where}[{n}]"
        if not isinstance(g, dict):
            raise ParseError("expected an object", at)
        label = str(g.get("label", f"x{n + 1}"))
        sigma = automorphism_from_json(g.get("sigma", "identity"), a, f"{at}.sigma")
        delta = map_from_json(g.get("delta", "zero"), a, f"{at}.delta")
        gens.append((label, SigmaDerivation(sigma, delta)))
    try:
        return GeneratorFamily(tuple(gens), a)
    except ValueError as exc:
        raise ParseError(str(exc), where) from None


def generators_to_json(fam: GeneratorFamily) -> list:
    return [
        {"label": t, "sigma": automorphism_to_json(sd.sigma), "delta": map_to_json(sd.delta)}
        for t, sd in fam.generators
    ]


# ---------------------------------------------------------------------------
# instances


@dataclass
class Instance:
    algebra: AlgebraPresentation
    family: GeneratorFamily
    V: Subspace
    N: int
    derivation: object | None = None  # lnd.Derivation


def instance_from_json(data) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    if "algebra" not in data:
        raise ParseError("missing field", "algebra")
    a = algebra_from_json(data["algebra"])
    fam = generators_from_json(data.get("generators"), a)
    v_data = data.get("V", "full")
    if v_data == "full":
        v = a.full()
    else:
        if not isinstance(v_data, list):
            raise ParseError('expected a list of vectors or "full"', "V")
        v = la.rref([_vector(x, a.dim, f"V[{i}]") for i, x in enumerate(v_data)], a.dim)
    n = _int(data.get("N", 1), "N", 0)
    der = None
    if data.get("derivation") is not None:
        from .lnd import Derivation

        der = Derivation(map_from_json(data["derivation"], a, "derivation"))
    return Instance(a, fam, v, n, der)


def instance_to_json(inst: Instance) -> dict:
    out = {
        "algebra": algebra_to_json(inst.algebra),
        "generators": generators_to_json(inst.family),
        "V": subspace_to_json(inst.V),
        "N": inst.N,
    }
    if inst.derivation is not None:
        out["derivation"] = map_to_json(inst.derivation.map)
    return out


def load_json(path) -> object:
    """Read JSON, turning decode problems into :class:`ParseError` with line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_instance(path) -> Instance:
    data = load_json(path)
    try:
        return instance_from_json(data)
    except ParseError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"inconsistent instance ({exc})") from None


# ---------------------------------------------------------------------------
# certificates


def subspace_from_json(data, n: int, where: str) -> Subspace:
    if not isinstance(data, list):
        raise ParseError("expected a list of vectors", where)
    return la.rref([_vector(x, n, f"{where}[{i}]") for i, x in enumerate(data)], n)


def certificate_from_json(data, a: AlgebraPresentation):
    from .skew import NilpotencyCertificate

    n = a.dim
    try:
        family = [
            (tuple(f["index"]), subspace_from_json(f["basis"], n, f"family_F[{i}].basis"))
            for i, f in enumerate(data["family_F"])
        ]
        return NilpotencyCertificate(
            kind=str(data["kind"]),
            V=subspace_from_json(data["V"], n, "V"),
            N=_int(data["N"], "N", 0),
            family_F=family,
            ideal_I=Ideal(a, subspace_from_json(data["ideal_I"], n, "ideal_I")),
            s=_int(data["s"], "s", 1),
            n=_int(data["n"], "n", 1),
            bound_l=_int(data["bound_l"], "bound_l", 1),
            verified=bool(data["verified"]),
            target=subspace_from_json(data["target"], n, "target"),
            stage=data.get("stage"),
            vanishing_exponent=data.get("vanishing_exponent"),
            transcript=dict(data.get("transcript", {})),
        )
    except KeyError as exc:
        raise ParseError("missing field", str(exc.args[0])) from None
