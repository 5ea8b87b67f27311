"""``chamberfold`` command line.

Exit codes: 0 success, 1 malformed input or unsupported request,
2 precondition violated, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import linalg as la
from .coxeter import DEFAULT_HORIZON, GroupElement, ReflectionGroup
from .errors import (
    BudgetExhausted,
    ChamberfoldError,
    NoInteriorFixedPoint,
    NonSimplicialChamber,
    NotFound,
    PreconditionViolated,
    SpecError,
    UniquenessViolation,
)
from .render import SectionRenderSpec, render_section
from .scalars import format_scalar, parse_scalar
from .solver import (
    SolverBudget,
    solve_affine,
    solve_hyperbolic_minus,
    solve_hyperbolic_plus,
    solve_spherical,
)
from .specfile import load_group
from .structure import enumerate_roots, regular_elements
from .verify import SUITES, UnsupportedSuite, run_suite

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3

VARIANT_GEOMETRY = {
    "spherical": "spherical",
    "affine": "affine",
    "hyperbolic-plus": "hyperbolic",
    "hyperbolic-minus": "hyperbolic",
}


class InputError(ValueError):
    pass


def parse_vector(text: str, n: int, exact: bool):
    parts = [p for p in text.replace(" ", "").split(",") if p != ""]
    if len(parts) != n:
        raise InputError(f"expected {n} comma-separated entries, got {len(parts)}")
    try:
        return tuple(parse_scalar(_number(p), exact) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector entry: {exc}") from exc


def _number(p: str):
    """Keep ``"p/q"`` and integers exact; decimals become floats."""
    if "/" in p:
        return p
    try:
        return int(p)
    except ValueError:
        return float(p)


def parse_h(text: str, G: ReflectionGroup) -> GroupElement:
    """``{"linear": [[..]], "translation": [..]}`` or ``{"word": [..]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--h is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("--h must be a JSON object")
    n, exact = G.rank, G.backend.exact
    if "word" in doc:
        try:
            return G.from_word(tuple(int(i) for i in doc["word"]))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise InputError(f"bad word in --h: {exc}") from exc
    try:
        lin = tuple(tuple(parse_scalar(x, exact) for x in row) for row in doc["linear"])
        tr = tuple(parse_scalar(x, exact) for x in doc.get("translation", [0] * n))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --h: {exc}") from exc
    if len(lin) != n or any(len(r) != n for r in lin) or len(tr) != n:
        raise InputError(f"--h must be {n}x{n} with a length-{n} translation")
    return GroupElement(lin, tr)


def _matrix_json(M):
    return [[format_scalar(x) for x in row] for row in M]


def _vector_json(v):
    return [format_scalar(x) for x in v]


def cmd_solve(args) -> dict:
    G = load_group(args.spec, args.budget)
    want = VARIANT_GEOMETRY[args.variant]
    if G.geometry != want:
        raise InputError(f"variant {args.variant} needs a {want} group, not {G.geometry}")
    u = parse_vector(args.u, G.rank, G.backend.exact)
    budget = SolverBudget(max_word_length=args.budget)
    unique = True
    if args.variant == "spherical":
        sol = solve_spherical(G, u)
    elif args.variant == "affine":
        h = parse_h(args.h, G) if args.h else None
        sol = solve_affine(G, u, h, budget)
        unique = sol.interior and not sol.alternatives
    elif args.variant == "hyperbolic-plus":
        sol = solve_hyperbolic_plus(G, u, budget, exhaustive=True)
    else:
        sol = solve_hyperbolic_minus(G, u, budget, exhaustive=True)
    if args.h and args.variant != "affine":
        raise InputError("--h applies to the affine variant only")
    w = sol.element
    out = {
        "w_word": list(w.word),
        "w_matrix": _matrix_json(w.linear),
        "witness": _vector_json(sol.witness),
        "tile_dim": sol.tile_dim,
        "unique": unique,
    }
    if G.geometry == "affine":
        out["w_translation"] = _vector_json(w.translation)
        if not sol.interior:
            out["closed_alcove_candidates"] = [list(a.element.word) for a in (sol, *sol.alternatives)]
    return out


def cmd_verify(args) -> dict:
    G = load_group(args.spec)
    return run_suite(G, args.suite, args.samples, args.seed)


def cmd_render(args) -> dict:
    G = load_group(args.spec)
    if G.geometry != "spherical" or G.rank not in (2, 3):
        raise InputError("render-section supports spherical groups of rank 2 or 3")
    plane = None
    if args.plane:
        *coeffs, level = parse_vector(args.plane, G.rank + 1, True)
        plane = (tuple(coeffs), level)
    spec = SectionRenderSpec(plane=plane, labels=not args.no_labels, region=args.region)
    sec = render_section(G, args.out, spec)
    return {"path": args.out, "polygons": len(sec.polygons), "segments": len(sec.segments),
            "points": len(sec.points)}


def cmd_info(args) -> dict:
    G = load_group(args.spec)
    p, q, z = la.inertia(G.gram, G.backend)
    order = G.order()
    info = {
        "name": G.name,
        "geometry": G.geometry,
        "backend": G.backend.name,
        "order": order if order is not None else "infinite",
        "simple_normals": len(G.generators),
        "signature": [p, q] if z == 0 else [p, q, z],
    }
    if G.is_finite:
        info["roots"] = len(enumerate_roots(G))
        info["regular_elements"] = len(regular_elements(G))
    if G.geometry == "affine":
        info["highest_root"] = _vector_json(G.highest_root)
        info["finite_order"] = G.finite_part.order()
    return info


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chamberfold", description="Tilings by (1 - w)C for reflection groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def spec_arg(p):
        p.add_argument("--spec", required=True, help="group spec JSON file or catalog name (a2, b3, t246, ...)")

    p = sub.add_parser("solve", help="find the tile containing u")
    spec_arg(p)
    p.add_argument("--variant", required=True, choices=sorted(VARIANT_GEOMETRY))
    p.add_argument("--u", required=True, help="comma-separated coordinates in the simple-normal basis")
    p.add_argument("--h", help='affine map as JSON: {"linear": [[...]], "translation": [...]} or {"word": [...]}')
    p.add_argument("--budget", type=int, default=DEFAULT_HORIZON, help="max word length (hyperbolic)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run a verification suite")
    spec_arg(p)
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render-section", help="draw a cross-section of the tile fan as SVG")
    spec_arg(p)
    p.add_argument("--out", required=True)
    p.add_argument("--region", default="dual-cone-fan", choices=("dual-cone-fan", "chamber-fan"))
    p.add_argument("--plane", help="slice c1,...,cn,level for rank 3 (default 1,1,1,1)")
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("info", help="summary of a group")
    spec_arg(p)
    p.set_defaults(func=cmd_info)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionViolated, NonSimplicialChamber, NoInteriorFixedPoint, NotFound,
            UniquenessViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, SpecError, UnsupportedSuite, ChamberfoldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(result))
    if args.command == "verify" and result["violations"]:
        return EXIT_PRECONDITION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
