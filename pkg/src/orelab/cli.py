"""Command-line front end.

JSON goes to stdout, a one-line human summary to stderr.  Exit codes:
0 success, 1 mathematical failure (witness printed), 2 I/O or parse error,
3 hypothesis not met, 4 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import linear as la
from .algebra import jacobson_radical, prime_radical_chain, validate_presentation, wedderburn_radical
from .errors import CapExceededError, GrassmannBoundaryError, HypothesisError
from .lnd import (
    check_prop_22,
    check_surjective,
    check_theorem_b,
    exp_derivation,
    format_terms,
    grassmann_preimage_terms,
    grassmann_truncation,
    kernel_filtration,
)
from .maps import check_automorphism, check_sigma_derivation
from .serialize import ParseError, load_instance, matrix_to_json, subspace_to_json, vector_to_json
from .skew import certify_theorem_14, certify_theorem_16, descent_bound

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2
EXIT_HYPOTHESIS = 3
EXIT_CAP = 4


def _emit(payload: dict, summary: str) -> None:
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _witness(w):
    if isinstance(w, tuple) and w and all(isinstance(x, la.Fraction) for x in w):
        return vector_to_json(w)
    return w


def cmd_validate(args) -> int:
    inst = load_instance(args.path)
    a = inst.algebra
    report = {"presentation": None, "generators": [], "derivation": None}
    ok = True
    c = validate_presentation(a)
    report["presentation"] = {"ok": c.ok, "witness": _witness(c.witness)}
    ok &= c.ok
    for label, sd in inst.family.generators:
        ca = check_automorphism(a, sd.sigma)
        cd = check_sigma_derivation(a, sd)
        report["generators"].append(
            {
                "label": label,
                "automorphism": {"ok": ca.ok, "witness": _witness(ca.witness)},
                "sigma_derivation": {"ok": cd.ok, "witness": _witness(cd.witness)},
            }
        )
        ok &= ca.ok and cd.ok
    if inst.derivation is not None:
        cd = check_sigma_derivation(a, inst.derivation.as_sigma_derivation())
        report["derivation"] = {
            "ok": cd.ok,
            "witness": _witness(cd.witness),
            "locally_nilpotent": inst.derivation.is_locally_nilpotent(),
        }
        ok &= cd.ok
    report["ok"] = ok
    _emit(report, f"validate: {'ok' if ok else 'FAILED'} (dim {a.dim}, {len(inst.family)} generators)")
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_radicals(args) -> int:
    a = load_instance(args.path).algebra
    w = wedderburn_radical(a)
    j = jacobson_radical(a)
    chain = prime_radical_chain(a)
    payload = {
        "dim": a.dim,
        "wedderburn": subspace_to_json(w.space),
        "jacobson": subspace_to_json(j.space),
        "chain": {
            "stages": [subspace_to_json(st.space) for st in chain.stages],
            "stage_dims": [st.dim for st in chain.stages],
            "stabilization_index": chain.stabilization_index,
        },
        "prime": subspace_to_json(chain.top.space),
    }
    _emit(payload, f"radicals: W dim {w.dim}, J dim {j.dim}, chain length {chain.stabilization_index}")
    return EXIT_OK


def cmd_certify(args) -> int:
    inst = load_instance(args.path)
    n = inst.N if args.N is None else args.N
    if n < 0:
        raise ParseError("must be nonnegative", "--N")
    if args.theorem in ("14", "power"):
        cert = certify_theorem_14(inst.algebra, inst.V, inst.family, n)
        payload = cert.to_json()
        _emit(payload, f"certify: n={cert.n} s={cert.s} bound={cert.bound_l} verified={cert.verified}")
        return EXIT_OK if cert.verified else EXIT_FAILURE
    certs = certify_theorem_16(inst.algebra, inst.family, n)
    ok = all(c.verified for c in certs)
    payload = {
        "levels": [c.to_json() for c in certs],
        "descent_bound": descent_bound(certs),
        "verified": ok,
    }
    _emit(payload, f"certify: {len(certs)} descent levels, bound {payload['descent_bound']}, verified={ok}")
    return EXIT_OK if ok else EXIT_FAILURE


def _parse_indices(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}", "--preimage") from None


def cmd_grassmann(args) -> int:
    try:
        t = grassmann_truncation(args.g)
    except ValueError as exc:
        raise ParseError(str(exc), "--g") from None
    d = t.derivation
    payload = {"g": t.g, "dim": t.dim, "basis": list(t.algebra.basis_names)}
    summary = [f"E{t.g}: dim {t.dim}"]
    if args.filtration:
        f = kernel_filtration(d)
        payload["filtration"] = [[t.format(v) for v in st.basis] for st in f.stages]
        summary.append(f"filtration dims {[s.dim for s in f.stages]}")
    if args.exp:
        e = exp_derivation(d)
        ok = check_automorphism(t.algebra, e).ok
        payload["exp"] = {"matrix": matrix_to_json(e.matrix), "automorphism": ok}
        summary.append(f"exp(d) automorphism={ok}")
    if args.preimage is not None:
        m = _parse_indices(args.preimage)
        try:
            terms = grassmann_preimage_terms(t.g, m)
        except GrassmannBoundaryError as exc:
            _emit({"error": str(exc), "required_g": exc.required}, f"preimage: {exc}")
            return EXIT_HYPOTHESIS
        x = t.vector(terms)
        back = d(x)
        ok = back == t.monomial(m)
        payload["preimage"] = {
            "target": format_terms({m: 1}),
            "preimage": format_terms(terms),
            "vector": vector_to_json(x),
            "d_of_preimage": t.format(back),
            "checked": ok,
        }
        summary.append(f"d({format_terms(terms)}) = {t.format(back)}")
        if not ok:
            _emit(payload, "; ".join(summary))
            return EXIT_FAILURE
    if not (args.filtration or args.exp or args.preimage is not None):
        payload["derivation"] = {"matrix": matrix_to_json(d.matrix)}
        payload["surjective_on_restricted_targets"] = check_surjective(d, t.restricted_targets()).ok
    _emit(payload, "; ".join(summary))
    return EXIT_OK


def cmd_lnd(args) -> int:
    inst = load_instance(args.path)
    if inst.derivation is None:
        raise ParseError("instance has no derivation", "derivation")
    a, d = inst.algebra, inst.derivation
    payload = {}
    ok = True
    c = check_prop_22(a, d)
    payload["nil_constants"] = {"ok": c.ok, "witness": repr(c.witness) if c.witness is not None else None, "transcript": c.transcript}
    ok &= c.ok
    targets = None
    if args.grassmann_targets:
        g = a.dim.bit_length()
        if a.dim != 2**g - 1:
            raise ParseError("not a Grassmann truncation", "--grassmann-targets")
        targets = grassmann_truncation(g).restricted_targets()
    if check_surjective(d, targets).ok:
        b = check_theorem_b(a, d, surjective_on=targets)
        payload["radical_square"] = {"ok": b.ok, "witness": repr(b.witness) if b.witness is not None else None, "transcript": b.transcript}
        ok &= b.ok
    _emit(payload, f"lnd: {'ok' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orelab", description="Exact computations in skew extensions of finite-dimensional algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check the presentation, automorphisms and sigma-derivations of an instance")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("radicals", help="Wedderburn, Jacobson and prime radicals")
    r.add_argument("path")
    r.set_defaults(func=cmd_radicals)

    c = sub.add_parser("certify", help="emit a nilpotency certificate")
    c.add_argument("path")
    c.add_argument(
        "--theorem",
        choices=["14", "16", "power", "descent"],
        default="14",
        help="14/power: A^n inside the radical; 16/descent: descent along the prime radical chain",
    )
    c.add_argument("--N", type=int, default=None, help="degree bound; overrides the instance's N")
    c.set_defaults(func=cmd_certify)

    g = sub.add_parser("grassmann", help="truncated Grassmann algebra with d(e_{i+1}) = e_i")
    g.add_argument("--g", type=int, required=True)
    g.add_argument("--preimage", metavar="I1,I2,..", help="monomial to find a preimage of")
    g.add_argument("--exp", action="store_true", help="matrix of exp(d)")
    g.add_argument("--filtration", action="store_true", help="kernel filtration stages")
    g.set_defaults(func=cmd_grassmann)

    n = sub.add_parser("lnd", help="nil test on the constants and the radical-square inclusion")
    n.add_argument("path")
    n.add_argument(
        "--grassmann-targets",
        action="store_true",
        help="treat d as onto when it hits every monomial with top index below g",
    )
    n.set_defaults(func=cmd_lnd)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError) as exc:
        _emit({"error": str(exc), "kind": "io"}, f"error: {exc}")
        return EXIT_IO
    except HypothesisError as exc:
        _emit({"error": str(exc), "kind": "hypothesis"}, f"hypothesis not met: {exc}")
        return EXIT_HYPOTHESIS
    except CapExceededError as exc:
        _emit({"error": str(exc), "kind": "cap"}, f"cap exceeded: {exc}")
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
