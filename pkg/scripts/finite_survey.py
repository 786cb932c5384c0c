#!/usr/bin/env python3
"""Survey residue rings: exhaustive cleanness and Pierce stalk orders.

Usage: python scripts/finite_survey.py --stop 30
"""

import argparse

from cleandecomp.finite import enumerate_ring, pierce_stalks, ring_n_clean
from cleandecomp.rings import IntegersMod


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--start", type=int, default=2)
    ap.add_argument("--stop", type=int, default=30, help="inclusive")
    ap.add_argument("--n", type=int, default=1, help="units per decomposition")
    args = ap.parse_args()
    for m in range(max(2, args.start), args.stop + 1):
        table = enumerate_ring(IntegersMod(m))
        clean, _ = ring_n_clean(table, args.n)
        orders = [s.order() for s in pierce_stalks(table).stalks]
        mark = "yes" if clean else "no"
        print(f"Zmod:{m:<3d} {args.n}-clean: {mark:3s} stalk orders: {orders}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
