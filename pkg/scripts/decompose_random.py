#!/usr/bin/env python3
"""Decompose pseudo-random square matrices over a chosen ring and verify
every claim by re-multiplication.

Usage: python scripts/decompose_random.py --ring Zmod:6 --size 4 --count 10
"""

import argparse
import random
from dataclasses import dataclass

from cleandecomp.decompose import decompose_nxn, verify_decomposition
from cleandecomp.matrices import Matrix
from cleandecomp.rings import parse_descriptor, random_element


@dataclass(frozen=True)
class SweepConfig:
    ring: str
    size: int
    count: int
    seed: int


def run(cfg: SweepConfig) -> int:
    ring = parse_descriptor(cfg.ring)
    rng = random.Random(cfg.seed)
    failures = 0
    for i in range(cfg.count):
        data = tuple(
            tuple(random_element(ring, rng).value for _ in range(cfg.size))
            for _ in range(cfg.size)
        )
        rep = verify_decomposition(decompose_nxn(Matrix(ring, data)))
        if not rep.all_ok:
            failures += 1
        print(f"matrix {i + 1:3d}: {'pass' if rep.all_ok else 'FAIL'}")
    print(
        f"{cfg.count - failures} of {cfg.count} verified "
        f"over {cfg.ring}, size {cfg.size}"
    )
    return 1 if failures else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ring", default="Z")
    ap.add_argument("--size", type=int, default=4)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    return run(SweepConfig(args.ring, args.size, args.count, args.seed))


if __name__ == "__main__":
    raise SystemExit(main())
