"""Normal Frattini subgroup order and height for every catalog group."""

import argparse

from obliquity.catalog import entries
from obliquity.invariants import phi_height, phi_normal, simple_product_decomposition


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=120)
    args = ap.parse_args()
    print(f"{'group':<36} {'order':>6} {'|Phi|':>6} {'height':>6}  factors")
    for e in entries(args.max_order):
        G = e.group
        dec = simple_product_decomposition(G)
        factors = "-" if dec is None else ",".join(str(S.order) for S in dec)
        print(f"{e.name:<36} {G.order:>6} {phi_normal(G).order:>6} {phi_height(G):>6}  {factors}")


if __name__ == "__main__":
    main()
