"""Stabilised ob(n) on cyclic(p) towers next to p^floor(log_p n)."""

import argparse

from obliquity.towers import build_cyclic_tower, ob_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=64)
    args = ap.parse_args()

    t = build_cyclic_tower(args.p, args.depth)
    print(f"{'n':>4} {'stable':>7} {'closed':>7}  levels")
    mismatches = 0
    for n in range(1, args.n_max + 1):
        prof = ob_profile(t, n)
        k = 0
        while args.p ** (k + 1) <= n:
            k += 1
        closed = args.p ** k
        mismatches += prof.stable_value != closed
        mark = "" if prof.stable_value == closed else "  <-- differs"
        print(f"{n:>4} {str(prof.stable_value):>7} {closed:>7}  {prof.per_level}{mark}")
    print(f"{mismatches} mismatches")


if __name__ == "__main__":
    main()
