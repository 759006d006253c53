"""Command-line interface: ``tvgroute {solve,generate,reduce,verify,render-sr}``.

Results go to stdout as JSON (``render-sr`` prints one stack per line).
Errors exit nonzero with a JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .budget import Limits
from .download import solve_download
from .errors import BudgetExceeded, FormulaError, GraphError, RoutingError, SchemaError
from .formats import (
    artifact_to_dict,
    parse_fraction,
    parse_instance,
    parse_solution,
    parse_source,
    serialize_instance,
    serialize_solution,
)
from .generators import random_instance, ring_instance
from .reductions import FAMILIES, build, verify_reduction_equivalence
from .segments import format_stack, render_segment_stacks
from .upload import solve_upload
from .validate import validate_download, validate_upload

EXIT_ERROR = 2
EXIT_BUDGET = 3


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance), args.variant)
    limits = Limits.from_env()
    if inst.phase == "download":
        sol = solve_download(inst, limits, exact=args.exact)
        problems = validate_download(inst, sol)
    else:
        sol = solve_upload(inst, limits, exact=args.exact)
        problems = validate_upload(inst, sol)
    if problems:
        raise RoutingError("solution failed replay validation: " + "; ".join(problems))
    _write(serialize_solution(sol), args.output)
    return 0


def cmd_generate(args) -> int:
    if args.kind == "random":
        inst = random_instance(args.variant, args.satellites, args.snapshots, args.clients, args.density,
                               args.seed, separate=args.separate)
    else:
        inst = ring_instance(args.variant, args.planes, args.per_plane, args.snapshots, args.clients,
                             parse_fraction(args.capacity, "capacity"),
                             None if args.cross_capacity is None else parse_fraction(args.cross_capacity, "cross-capacity"),
                             args.cross_shift, separate=args.separate, seed=args.seed)
    _write(serialize_instance(inst), args.output)
    return 0


def cmd_reduce(args) -> int:
    source = parse_source(args.family, _read(args.source))
    options = {}
    if args.hub and args.family == "3sat-1sfws":
        options["hub"] = args.hub
    if args.target is not None and args.family == "max3sat-2ufcs":
        options["target"] = args.target
    art = build(args.family, source, **options)
    _write(json.dumps(artifact_to_dict(art), indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    params: dict = {}
    if args.family == "mvc-1sfcs":
        params["max_vertices"] = args.max_vertices
        params["exhaustive"] = args.exhaustive is not None
    elif args.family == "2edp-mul2mm":
        params["nodes"] = args.nodes
        params["density"] = args.density
    else:
        params["max_vars"] = args.max_vars
        params["max_clauses"] = args.max_clauses
        if args.exhaustive:
            params["exhaustive"] = tuple(args.exhaustive)
        if args.hub:
            params["hub"] = args.hub
    report = verify_reduction_equivalence(args.family, params, args.trials, args.seed, Limits.from_env())
    _write(report.to_json(include_timing=not args.no_timing) + "\n", args.output)
    return 0


def cmd_render(args) -> int:
    sol = parse_solution(_read(args.solution))
    labels = None
    if args.labels:
        labels = {int(k): v for k, v in json.loads(_read(args.labels)).items()}
    lines = [format_stack(s) for s in render_segment_stacks(sol, labels)]
    _write("".join(line + "\n" for line in lines), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tvgroute", description="Optimal model routing over time-varying satellite graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance file ('-' for stdin)")
    s.add_argument("instance")
    s.add_argument("--variant", default="auto", help="variant name such as 1-UF-WS, or 'auto' (default)")
    s.add_argument("--exact", action="store_true", help="force the exhaustive solver")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", help="generate an instance")
    g.add_argument("kind", choices=("random", "ring"))
    g.add_argument("--variant", default="1-UF-WS")
    g.add_argument("--satellites", type=int, default=5, help="random: satellite count")
    g.add_argument("--snapshots", type=int, default=3)
    g.add_argument("--clients", type=int, default=2)
    g.add_argument("--density", type=float, default=0.45, help="random: link probability per pair and snapshot")
    g.add_argument("--separate", action="store_true", help="two models with different servers")
    g.add_argument("--planes", type=int, default=2, help="ring: orbital planes")
    g.add_argument("--per-plane", type=int, default=4, help="ring: satellites per plane")
    g.add_argument("--capacity", default="1", help="ring: in-plane link capacity")
    g.add_argument("--cross-capacity", help="ring: cross-plane link capacity (defaults to --capacity)")
    g.add_argument("--cross-shift", type=int, default=1, help="ring: rotation of cross-plane pairing per snapshot")
    g.add_argument("--seed", type=int, default=0, help="generator seed")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("reduce", help="build a hardness gadget from a source problem file")
    r.add_argument("family", choices=FAMILIES)
    r.add_argument("source")
    r.add_argument("--hub", help="hub capacity for 3sat-1sfws: '1+n/(n+1)' (default), '1+1/n' or p/q")
    r.add_argument("--target", type=int, help="clause target for max3sat-2ufcs")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check gadget answers against brute force")
    v.add_argument("family", choices=FAMILIES)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-vars", type=int, default=3)
    v.add_argument("--max-clauses", type=int, default=4)
    v.add_argument("--max-vertices", type=int, default=4)
    v.add_argument("--nodes", type=int, default=6)
    v.add_argument("--density", type=float, default=0.35)
    v.add_argument("--exhaustive", type=int, nargs="*", metavar="N",
                   help="formulas: VARS CLAUSES to enumerate; graphs: flag only")
    v.add_argument("--hub")
    v.add_argument("--no-timing", action="store_true", help="omit runtimes for reproducible output")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("render-sr", help="print segment stacks of a solution file")
    d.add_argument("solution")
    d.add_argument("--labels", help="JSON object mapping satellite ids to names")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_render)
    return p


def _fail(kind: str, message: str, code: int, **extra) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        return _fail("BudgetExceeded", str(exc), EXIT_BUDGET)
    except SchemaError as exc:
        return _fail(type(exc).__name__, exc.message, EXIT_ERROR, field=exc.field)
    except (RoutingError, FormulaError, GraphError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_ERROR)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
