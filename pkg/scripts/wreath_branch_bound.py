"""ob(n) tables and the least c with ob(n) <= c^n on iterated wreath towers."""

import argparse

from obliquity.dsl import evaluate, parse
from obliquity.towers import branch_bound_report, build_wreath_tower, ob_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", default="cyclic(2)", help="transitive base group, as an expression")
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--star", action="store_true")
    args = ap.parse_args()

    t = build_wreath_tower(evaluate(parse(args.base)), args.depth)
    print(f"level orders: {t.orders()}")
    for n in range(1, args.n_max + 1):
        prof = ob_profile(t, n, args.star)
        tail = " (truncated)" if prof.truncated else ""
        print(f"n={n:>2}  {prof.per_level}{tail}")
    b = branch_bound_report(t, args.n_max)
    print(f"depth used: {b.computed_depth}, c = {b.c:.4f}")


if __name__ == "__main__":
    main()
