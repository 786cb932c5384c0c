#!/usr/bin/env python3
"""Print, for odd m in a range, whether doubling mod m walks one full cycle.

Usage: python scripts/sigma_table.py --stop 41
"""

import argparse

from cleandecomp.groupring import sigma_is_cyclic


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--start", type=int, default=3)
    ap.add_argument("--stop", type=int, default=41, help="inclusive upper bound")
    args = ap.parse_args()
    start = args.start if args.start % 2 else args.start + 1
    for m in range(max(3, start), args.stop + 1, 2):
        mark = "yes" if sigma_is_cyclic(m) else "no"
        print(f"m = {m:3d}: one full cycle: {mark}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
