"""Command-line front end.

    obliquity compute --expr E --n-max N [--star] [--format json|csv]
                      [--stab-window S] [--max-exhaustive-order M] [--generators-file F]
    obliquity verify --suite NAME [--max-order M] [--seed S]
    obliquity parse --expr E [--check]

The expression and suite may also be given positionally.  Exit codes:
0 success, 1 suite failure, 2 usage or parse error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .dsl import DslEvalError, DslRangeError, DslSyntaxError, evaluate, parse, print_ast
from .invariants import ob_value
from .permcore.group import DEFAULT_EXHAUSTIVE_ORDER, DEFAULT_OBSTAR_CAP, FiniteGroup, ResourceError, generate
from .permcore.perm import Permutation, parse_cycles
from .towers import Tower, ob_profile

SCHEMA_VERSION = 1
EXIT_OK, EXIT_SUITE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def read_generators(path: str, max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> FiniteGroup:
    """One permutation per line in 0-based cycle notation; '#' starts a comment."""
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    cycles = [parse_cycles(ln) for ln in lines if ln]
    if not cycles:
        raise ValueError(f"{path}: no generators")
    degree = 1 + max((p for c in cycles for cyc in c for p in cyc), default=0)
    return generate([Permutation.from_cycles(c, degree) for c in cycles], max_exhaustive=max_exhaustive)


def compute_document(obj, expr: str, n_max: int, star: bool = False, window: int = 2,
                     max_exhaustive: int = DEFAULT_EXHAUSTIVE_ORDER) -> dict:
    """The result document for a group or tower: one row per n."""
    rows = []
    depth_info = {}
    if isinstance(obj, Tower):
        kind = "tower"
        for n in range(1, n_max + 1):
            prof = ob_profile(obj, n, star, window, max_exhaustive)
            rows.append({"n": n, "levels": prof.per_level, "stabilized": prof.stabilized,
                         "stable": prof.stable_value})
            depth_info = {"depth": obj.depth, "computed_depth": prof.computed_depth,
                          "truncated": prof.truncated}
    else:
        kind = "group"
        obj.require_exhaustive("ob table")
        for n in range(1, n_max + 1):
            v = ob_value(obj, n, star).value
            # a single finite group is its own limit
            rows.append({"n": n, "levels": [v], "stabilized": True, "stable": v})
        depth_info = {"depth": 1, "computed_depth": 1, "truncated": False}
    return {
        "schema_version": SCHEMA_VERSION,
        "expr": expr,
        "kind": kind,
        "params": {"n_max": n_max, "star": star, "window": window,
                   "caps": {"max_exhaustive_order": max_exhaustive, "obstar_cap": DEFAULT_OBSTAR_CAP}},
        **depth_info,
        "rows": rows,
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "level", "value", "stabilized", "stable"])
    for row in doc["rows"]:
        stable = "" if row["stable"] is None else row["stable"]
        for k, v in enumerate(row["levels"], start=1):
            w.writerow([row["n"], k, v, str(row["stabilized"]).lower(), stable])
    return buf.getvalue()


def _cmd_compute(args) -> int:
    if args.n_max < 1:
        print("error: --n-max must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.generators_file:
        obj = read_generators(args.generators_file, args.max_exhaustive_order)
        expr = f"file:{args.generators_file}"
    else:
        ast = parse(args.expr)
        obj = evaluate(ast, args.max_exhaustive_order)
        expr = print_ast(ast)
    doc = compute_document(obj, expr, args.n_max, args.star, args.stab_window, args.max_exhaustive_order)
    sys.stdout.write(to_csv(doc) if args.format == "csv" else to_json(doc) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite not in SUITES + ("all",):
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}",
              file=sys.stderr)
        return EXIT_USAGE
    log = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    r = run_suite(args.suite, args.max_order, args.seed, log)
    if r.ok:
        print(f"PASS {args.suite}: {r.checked} checks, max order {args.max_order}")
        return EXIT_OK
    print(f"FAIL {args.suite}: {len(r.failures)} failures in {r.checked} checks")
    expr, msg = r.failures[0]
    print(f"reproducer: {expr}  ({msg})")
    return EXIT_SUITE


def _cmd_parse(args) -> int:
    ast = parse(args.expr)
    text = print_ast(ast)
    print(text)
    if args.check and parse(text) != ast:
        print("round trip failed", file=sys.stderr)
        return EXIT_SUITE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="obliquity", description="Normal Frattini subgroups, oblique cores and ob-functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="ob table for a group, ob profiles for a tower")
    c.add_argument("expr_pos", nargs="?", metavar="EXPR")
    c.add_argument("--expr")
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--star", action="store_true", help="use the strong oblique core")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--stab-window", type=int, default=2)
    c.add_argument("--max-exhaustive-order", type=int, default=DEFAULT_EXHAUSTIVE_ORDER)
    c.add_argument("--generators-file", help="permutations in 0-based cycle notation, one per line")
    c.set_defaults(func=_cmd_compute)

    v = sub.add_parser("verify", help="run a property suite over the catalog")
    v.add_argument("suite_pos", nargs="?", metavar="SUITE")
    v.add_argument("--suite")
    v.add_argument("--max-order", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("parse", help="print the canonical form of an expression")
    s.add_argument("expr_pos", nargs="?", metavar="EXPR")
    s.add_argument("--expr")
    s.add_argument("--check", action="store_true", help="also check the parse/print round trip")
    s.set_defaults(func=_cmd_parse)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        args.suite = args.suite or args.suite_pos
        if not args.suite:
            parser.error("verify needs a suite name")
    else:
        args.expr = args.expr or args.expr_pos
        if not args.expr and not getattr(args, "generators_file", None):
            parser.error(f"{args.command} needs an expression")
    try:
        return args.func(args)
    except DslSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DslRangeError, DslEvalError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
