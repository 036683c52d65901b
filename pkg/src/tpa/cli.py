"""Command-line interface.

Subcommands: derivations (compute a weight-w derivation space), verify
(axiom report for a product), search (parametrize, constrain, and sample
structures), transport (push a product through an automorphism), reproduce
(run the full acceptance suite). Rationals are serialized as "p/q" strings;
identical flags and seed give byte-identical output. Exit codes: 0 success,
1 verify found a non-TP product, 2 usage error, 3 input parse/validation
error, 4 unwritable output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .acceptance import DEFAULT_SEED, run_all
from .classify import (
    associativity_constraints,
    conjugation_automorphism,
    flip_automorphism,
    normalize_tn,
    sample_solutions,
    support_pattern,
    tp_ansatz,
    trace_scaling_automorphism,
    transport,
)
from .halfderiv import delta_derivation_space
from .liealg import (
    LieAlgebra,
    algebra_from_json,
    algebra_to_json,
    full_matrix,
    special_linear,
    upper_triangular,
)
from .linalg import parse_rational
from .products import BilinearProduct, catalog, catalog_algebra, is_tp_structure


class InputError(Exception):
    """Bad file contents or inconsistent flags; mapped to exit code 3."""


def _seed_default() -> int:
    env = os.environ.get("TPA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as e:
            raise InputError(f"TPA_SEED must be an integer, got {env!r}") from e
    return DEFAULT_SEED


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON in {path}: {e}") from e


def _write_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_algebra(args) -> LieAlgebra:
    kind = args.algebra
    if kind == "file":
        if not args.file:
            raise InputError("--algebra file requires --file")
        try:
            L = algebra_from_json(_load_json(args.file))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad algebra file: {e}") from e
        jac = L.check_jacobi()
        if not jac.ok:
            raise InputError(f"structure constants violate the Jacobi identity at {jac.triple}")
        return L
    if args.n is None:
        raise InputError(f"--algebra {kind} requires --n")
    try:
        if kind == "tn":
            return upper_triangular(args.n)
        if kind == "mn":
            return full_matrix(args.n)
        if kind == "sln":
            return special_linear(args.n)
    except ValueError as e:
        raise InputError(str(e)) from e
    raise InputError(f"unknown algebra kind {kind!r}")


def _resolve_product(args, L: LieAlgebra) -> BilinearProduct:
    if getattr(args, "product", None):
        try:
            p = BilinearProduct.from_json(_load_json(args.product))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad product file: {e}") from e
    elif getattr(args, "catalog", None):
        try:
            p = catalog(args.catalog, n=args.n, c=Fraction(args.c))
            cat_L = catalog_algebra(args.catalog, n=args.n)
        except ValueError as e:
            raise InputError(str(e)) from e
        if cat_L is not L:
            raise InputError("catalog product lives on a different algebra than requested")
    else:
        raise InputError("provide --product FILE or --catalog NAME")
    if p.dim != L.dim:
        raise InputError(f"product dimension {p.dim} does not match algebra dimension {L.dim}")
    return p


def _meta(args, seed=None) -> dict:
    meta = {
        "tool": "tpa",
        "version": __version__,
        "algebra": args.algebra,
        "n": args.n,
    }
    if seed is not None:
        meta["seed"] = seed
    return meta


# -- subcommands -------------------------------------------------------------

def cmd_derivations(args) -> int:
    L = _resolve_algebra(args)
    try:
        weight = parse_rational(args.weight)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad weight {args.weight!r}: {e}") from e
    basis = delta_derivation_space(L, weight)
    payload = _meta(args)
    payload.update({
        "weight": str(weight),
        "dimension": len(basis),
        "basis": [phi.to_json() for phi in basis],
    })
    _write_json(payload, args.out)
    return 0


def cmd_verify(args) -> int:
    L = _resolve_algebra(args)
    p = _resolve_product(args, L)
    report = is_tp_structure(L, p)
    payload = _meta(args)
    payload["report"] = report.to_json()
    if L.name.startswith("t") and L.n is not None and L.name == f"t{L.n}":
        pattern = support_pattern(L, p)
        payload["support_pattern"] = {
            "matched": pattern.matched,
            "b": str(pattern.b) if pattern.b is not None else None,
            "violations": list(pattern.violations),
        }
        if report.is_tp and L.n > 2:
            tag, _canonical = normalize_tn(L, p)
            payload["normal_form"] = tag
    _write_json(payload, args.out)
    return 0 if report.is_tp else 1


def cmd_search(args) -> int:
    if args.algebra not in ("tn", "mn"):
        raise InputError("search supports --algebra tn or mn")
    L = _resolve_algebra(args)
    seed = args.seed if args.seed is not None else _seed_default()
    fam = tp_ansatz(L)
    constraints = associativity_constraints(L, fam)
    samples = sample_solutions(fam, constraints, seed=seed, count=args.count)
    pattern_violations = []
    normal_forms = set()
    is_tn = L.name == f"t{L.n}"
    for assignment, p in samples:
        if is_tn:
            pattern = support_pattern(L, p)
            if not pattern.matched:
                pattern_violations.append({
                    "assignment": {k: str(v) for k, v in assignment.items()},
                    "violations": list(pattern.violations),
                })
                continue
            if L.n > 2:
                tag, canonical = normalize_tn(L, p)
                normal_forms.add((tag, json.dumps(canonical.to_json(), sort_keys=True)))
            else:
                normal_forms.add(("n=2", json.dumps(p.to_json(), sort_keys=True)))
        else:
            normal_forms.add(("c_family", json.dumps(p.to_json(), sort_keys=True)))
    payload = _meta(args, seed=seed)
    payload.update({
        "family_parameters": fam.n_params,
        "constraints": len(constraints),
        "samples": len(samples),
        "pattern_violations": pattern_violations,
        "normal_forms": [{"tag": tag, "product": json.loads(body)}
                         for tag, body in sorted(normal_forms)],
    })
    _write_json(payload, args.out)
    return 0


def cmd_transport(args) -> int:
    L = _resolve_algebra(args)
    p = _resolve_product(args, L)
    chosen = [x for x in (args.conjugate, "flip" if args.flip else None,
                          args.trace_scale) if x]
    if len(chosen) != 1:
        raise InputError("choose exactly one of --conjugate, --flip, --trace-scale")
    try:
        if args.conjugate:
            spec = args.conjugate
            raw = _load_json(spec[1:]) if spec.startswith("@") else json.loads(spec)
            if isinstance(raw, dict):
                raw = raw.get("element")
            if not isinstance(raw, list) or len(raw) != L.dim:
                raise InputError("conjugating element must be a list of dim rationals")
            u = [parse_rational(x) for x in raw]
            g = conjugation_automorphism(L, u)
        elif args.flip:
            g = flip_automorphism(args.n)
        else:
            g = trace_scaling_automorphism(args.n, parse_rational(args.trace_scale))
    except (ValueError, json.JSONDecodeError) as e:
        raise InputError(str(e)) from e
    q = transport(L, p, g)
    payload = _meta(args)
    payload.update({"automorphism": g.kind, "product": q.to_json()})
    _write_json(payload, args.out)
    return 0


def cmd_reproduce(args) -> int:
    seed = args.seed if args.seed is not None else _seed_default()
    if args.n_max < 2 or args.n_max > 6:
        raise InputError("--n-max must be between 2 and 6")
    out_dir = args.out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
        probe = os.path.join(out_dir, ".write-probe")
        with open(probe, "w", encoding="utf-8") as fh:
            fh.write("")
        os.unlink(probe)
    except OSError as e:
        print(f"error: output directory not writable: {e}", file=sys.stderr)
        return 4
    summary = run_all(n_max=args.n_max, seed=seed)
    for report in summary["criteria"]:
        _write_json(report, os.path.join(out_dir, f"criterion_{report['id']:02d}.json"))
        status = "PASS" if report["passed"] else "FAIL"
        print(f"{status} criterion {report['id']:2d}: {report['title']}"
              f" ({report['elapsed_s']}s)")
    _write_json(summary, os.path.join(out_dir, "summary.json"))
    print(f"{'PASS' if summary['passed'] else 'FAIL'}: "
          f"{sum(r['passed'] for r in summary['criteria'])}/{len(summary['criteria'])} criteria")
    return 0 if summary["passed"] else 1


def cmd_export_algebra(args) -> int:
    L = _resolve_algebra(args)
    _write_json(algebra_to_json(L), args.out)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpa",
        description="Exact computations with half-derivations and transposed "
                    "Poisson structures on matrix Lie algebras.",
    )
    parser.add_argument("--version", action="version", version=f"tpa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_algebra_flags(p, kinds=("tn", "mn", "sln", "file")):
        p.add_argument("--algebra", required=True, choices=kinds)
        p.add_argument("--n", type=int)
        p.add_argument("--file", help="algebra JSON (with --algebra file)")

    p = sub.add_parser("derivations", help="compute a weight-w derivation space")
    add_algebra_flags(p)
    p.add_argument("--weight", default="1/2", help='rational weight, e.g. "1/2"')
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_derivations)

    p = sub.add_parser("verify", help="axiom report for a bilinear product")
    add_algebra_flags(p)
    p.add_argument("--product", help="product JSON file")
    p.add_argument("--catalog", help='catalog name, e.g. "t2:T16", "tn_corner", "mn_trace"')
    p.add_argument("--c", default="1", help="parameter for catalog families")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="parametrize, constrain, and sample TP structures")
    add_algebra_flags(p, kinds=("tn", "mn"))
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("transport", help="push a product through an automorphism")
    add_algebra_flags(p, kinds=("tn", "mn"))
    p.add_argument("--product", help="product JSON file")
    p.add_argument("--catalog", help="catalog name")
    p.add_argument("--c", default="1", help="parameter for catalog families")
    p.add_argument("--conjugate",
                   help="conjugating element: inline JSON list of rationals, or @file")
    p.add_argument("--flip", action="store_true", help="the antidiagonal flip of T_n")
    p.add_argument("--trace-scale", help="central scaling factor (M_n only)")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("reproduce", help="run the full acceptance suite")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("export-algebra", help="emit the JSON form of a built-in algebra")
    add_algebra_flags(p)
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(func=cmd_export_algebra)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
