"""Batch command-line front end.

Each subcommand parses its inputs, dispatches to the library, and prints
a structured plain-text report: deterministic field order, exact element
strings, generator factorizations when present.  Exit status 0 means
every verification in the report passed, 1 means some verification
failed, 2 means the input was malformed or out of scope.

The CLEANDECOMP_SEED environment variable (default 0) seeds any sampled
randomness and is echoed in the report header so runs are reproducible
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .banded import MAX_WINDOW, operator_from_spec, theorem8_decompose, window_verify
from .decompose import (
    decompose_nxn,
    lengthen_decomposition,
    verify_decomposition,
)
from .errors import (
    BadInput,
    CleanDecompError,
    DescriptorMismatch,
    InputError,
    NotAUnit,
    ParseError,
    ShapeMismatch,
)
from .finite import enumerate_ring, is_element_n_clean, oracle_witness_decomposition, pierce_stalks, ring_n_clean
from .groupring import (
    clean_check_localized,
    sigma_is_cyclic,
    two_good_group_ring,
    unit_invert_groupring,
)
from .matrices import ElementaryTransvection, Matrix, NegateAll, RowSwap
from .rings import Element, GroupRing, format_descriptor, parse_descriptor

MAX_CLEAN_INDEX = 8


def _seed() -> int:
    raw = os.environ.get("CLEANDECOMP_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise BadInput(f"CLEANDECOMP_SEED must be an integer, got {raw!r}") from None


def _header(seed: int) -> list:
    return ["cleandecomp report", f"seed: {seed}"]


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _mark(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def _fmt_value(v) -> str:
    if isinstance(v, Matrix):
        return v.fmt()
    if isinstance(v, Element):
        return v.ring.fmt(v.value)
    return str(v)


def _fmt_generator(g) -> str:
    if isinstance(g, ElementaryTransvection):
        return f"T({g.i},{g.j};{_fmt_value(g.r)};{g.side})"
    if isinstance(g, RowSwap):
        return f"S({g.i},{g.j})"
    if isinstance(g, NegateAll):
        return "NEG"
    return str(g)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def _cmd_decompose(args) -> tuple:
    ring = parse_descriptor(args.ring)
    if not 2 <= args.n <= MAX_CLEAN_INDEX:
        raise BadInput(f"--n must be between 2 and {MAX_CLEAN_INDEX}, got {args.n}")
    data = _load_json(args.input)
    if not isinstance(data, dict) or "matrix" not in data:
        raise ParseError('matrix file needs a "matrix" key')
    if "ring" in data and parse_descriptor(data["ring"]) != ring:
        raise DescriptorMismatch(
            f'file declares ring {data["ring"]!r} but --ring says {args.ring!r}'
        )
    raw_rows = data["matrix"]
    if not isinstance(raw_rows, list) or not raw_rows or any(
        not isinstance(r, list) or len(r) != len(raw_rows) for r in raw_rows
    ):
        raise ShapeMismatch("matrix must be a square list of element-string lists")
    size = len(raw_rows)
    if args.size is not None and args.size != size:
        raise BadInput(f"--size says {args.size} but the matrix is {size}x{size}")
    m = Matrix(ring, tuple(tuple(ring.parse(str(s)) for s in row) for row in raw_rows))

    dec = decompose_nxn(m)
    for _ in range(args.n - 2):
        dec = lengthen_decomposition(dec)
    rep = verify_decomposition(dec)

    lines = [
        "command: decompose",
        f"ring: {format_descriptor(ring)}",
        f"size: {size}",
        f"units requested: {args.n}",
        f"target: {_fmt_value(dec.target)}",
        f"idempotent: {_fmt_value(dec.idempotent)}",
    ]
    for k, w in enumerate(dec.units, start=1):
        lines.append(f"unit {k}: {_fmt_value(w.value)}")
        lines.append(f"unit {k} inverse: {_fmt_value(w.inverse)}")
        if w.factorization is None:
            lines.append(f"unit {k} factorization: none")
        else:
            lines.append(
                f"unit {k} factorization: "
                + " * ".join(_fmt_generator(g) for g in w.factorization)
            )
    lines.append(f"check idempotent: {_mark(rep.idempotent_ok)}")
    lines.append(f"check sum: {_mark(rep.sum_ok)}")
    for k, ur in enumerate(rep.unit_reports, start=1):
        lines.append(f"check unit {k}: {_mark(ur.two_sided_ok)}")
        if ur.factorization_ok is not None:
            lines.append(f"check unit {k} factorization: {_mark(ur.factorization_ok)}")
    lines.append(f"verdict: {_mark(rep.all_ok)}")
    return lines, 0 if rep.all_ok else 1


def _cmd_oracle(args) -> tuple:
    ring = parse_descriptor(args.ring)
    if not 1 <= args.n <= MAX_CLEAN_INDEX:
        raise BadInput(f"--n must be between 1 and {MAX_CLEAN_INDEX}, got {args.n}")
    table = enumerate_ring(ring)
    all_clean = True
    first_bad = None
    verified = 0
    witness_failures = 0
    clean_count = 0
    for a in table.elements:
        ok, wit = is_element_n_clean(a, args.n, table)
        if not ok:
            all_clean = False
            if first_bad is None:
                first_bad = a
            continue
        clean_count += 1
        dec = oracle_witness_decomposition(table, a, wit)
        if verify_decomposition(dec).all_ok:
            verified += 1
        else:
            witness_failures += 1
    lines = [
        "command: oracle",
        f"ring: {format_descriptor(ring)}",
        f"n: {args.n}",
        f"order: {len(table.elements)}",
        f"units: {len(table.units)}",
        f"idempotents: {len(table.idempotents)}",
        f"central idempotents: {len(table.central_idempotents)}",
        f"{args.n}-clean elements: {clean_count} of {len(table.elements)}",
        f"ring {args.n}-clean: {_yn(all_clean)}",
    ]
    if first_bad is not None:
        lines.append(f"first element with no decomposition: {ring.fmt(first_bad)}")
    witnesses_ok = witness_failures == 0
    lines.append(f"check witness decompositions ({verified} verified): {_mark(witnesses_ok)}")
    lines.append(f"verdict: {_mark(witnesses_ok)}")
    return lines, 0 if witnesses_ok else 1


def _cmd_pierce(args) -> tuple:
    ring = parse_descriptor(args.ring)
    table = enumerate_ring(ring)
    rep = pierce_stalks(table)
    ring_clean, _ = ring_n_clean(table, 1)
    lines = [
        "command: pierce",
        f"ring: {format_descriptor(ring)}",
        f"order: {len(table.elements)}",
        f"central idempotents: {len(table.central_idempotents)}",
        f"maximal idempotent-span ideals: {len(rep.ideals)}",
    ]
    stalks_clean = []
    for k, (ideal, stalk) in enumerate(zip(rep.ideals, rep.stalks), start=1):
        gens = ", ".join(ring.fmt(g) for g in ideal.generators)
        clean, _ = ring_n_clean(stalk, 1)
        stalks_clean.append(clean)
        lines.append(
            f"stalk {k}: ideal generators [{gens}], ideal size {len(ideal.elements)}, "
            f"stalk order {len(stalk.elements)}, stalk 1-clean: {_yn(clean)}"
        )
    lines.append(f"ring 1-clean: {_yn(ring_clean)}")
    agree = ring_clean == all(stalks_clean)
    lines.append(f"check stalkwise cleanness matches the ring: {_mark(agree)}")
    lines.append(f"verdict: {_mark(agree)}")
    return lines, 0 if agree else 1


def _cmd_banded(args) -> tuple:
    if not 1 <= args.window <= MAX_WINDOW:
        raise BadInput(
            f"--window must be between 1 and {MAX_WINDOW}, got {args.window}"
        )
    data = _load_json(args.spec)
    op = operator_from_spec(data)
    dec = theorem8_decompose(op)
    rep = window_verify(op, dec, args.window)
    source = data.get("builtin")
    if source is None:
        offsets = sorted(band["offset"] for band in data["bands"])
        source = f"bands at offsets {offsets}"
    else:
        source = f"builtin {source}"
    lines = [
        "command: banded",
        f"ring: {format_descriptor(op.base)}",
        f"source: {source}",
        f"bandwidth: {op.bandwidth}",
    ]
    lines.extend(rep.lines())
    lines.append(f"verdict: {_mark(rep.all_ok)}")
    return lines, 0 if rep.all_ok else 1


def _cmd_groupring(args) -> tuple:
    base = parse_descriptor(args.base)
    if args.order < 1:
        raise BadInput(f"--order must be >= 1, got {args.order}")
    ring = GroupRing(base, args.order)
    el = Element(ring, ring.parse(args.element))
    lines = [
        "command: groupring",
        f"base: {format_descriptor(base)}",
        f"order: {args.order}",
        f"op: {args.op}",
        f"element: {ring.fmt(el.value)}",
    ]

    if args.op == "invert":
        try:
            w = unit_invert_groupring(el)
        except NotAUnit as exc:
            lines.append(f"check inversion: FAIL ({exc})")
            lines.append("verdict: FAIL")
            return lines, 1
        lines.append(f"inverse: {ring.fmt(w.inverse.value)}")
        lines.append(f"check inversion: {_mark(w.verify())}")
        lines.append(f"verdict: {_mark(w.verify())}")
        return lines, 0 if w.verify() else 1

    if args.op == "clean":
        ok, wit = clean_check_localized(el)
        lines.append(f"clean: {_yn(ok)}")
        if not ok:
            lines.append("verdict: pass")
            return lines, 0
        e, w = wit
        checks = e.is_idempotent() and w.verify()
        lines.append(f"witness idempotent: {ring.fmt(e.value)}")
        lines.append(f"witness unit: {ring.fmt(w.value.value)}")
        lines.append(f"witness unit inverse: {ring.fmt(w.inverse.value)}")
        lines.append(f"check witness: {_mark(checks)}")
        lines.append(f"verdict: {_mark(checks)}")
        return lines, 0 if checks else 1

    # twogood
    w1, w2 = two_good_group_ring(el)
    sum_ok = w1.value + w2.value == el
    ok = sum_ok and w1.verify() and w2.verify()
    lines.append(f"unit 1: {ring.fmt(w1.value.value)}")
    lines.append(f"unit 1 inverse: {ring.fmt(w1.inverse.value)}")
    lines.append(f"unit 2: {ring.fmt(w2.value.value)}")
    lines.append(f"unit 2 inverse: {ring.fmt(w2.inverse.value)}")
    lines.append(f"check sum: {_mark(sum_ok)}")
    lines.append(f"check unit 1: {_mark(w1.verify())}")
    lines.append(f"check unit 2: {_mark(w2.verify())}")
    lines.append(f"verdict: {_mark(ok)}")
    return lines, 0 if ok else 1


def _cmd_sigma(args) -> tuple:
    result = sigma_is_cyclic(args.m)
    lines = [
        "command: sigma",
        f"m: {args.m}",
        f"doubling map is one full cycle: {_yn(result)}",
        "verdict: pass",
    ]
    return lines, 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cleandecomp",
        description="Exact idempotent-plus-units decompositions with verification.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a square matrix from a JSON file")
    d.add_argument("--ring", required=True, help="entry ring descriptor")
    d.add_argument("--input", required=True, help='JSON file with a "matrix" key')
    d.add_argument("--n", type=int, default=2, help="number of units (2..8)")
    d.add_argument("--size", type=int, default=None, help="expected matrix size")
    d.set_defaults(handler=_cmd_decompose)

    o = sub.add_parser("oracle", help="brute-force n-cleanness over a finite ring")
    o.add_argument("--ring", required=True)
    o.add_argument("--n", type=int, required=True)
    o.set_defaults(handler=_cmd_oracle)

    pi = sub.add_parser("pierce", help="idempotent-span stalks of a finite ring")
    pi.add_argument("--ring", required=True)
    pi.set_defaults(handler=_cmd_pierce)

    b = sub.add_parser("banded", help="decompose and window-verify a banded operator")
    b.add_argument("--spec", required=True, help="JSON operator spec file")
    b.add_argument("--window", type=int, required=True, help=f"window size (1..{MAX_WINDOW})")
    b.set_defaults(handler=_cmd_banded)

    g = sub.add_parser("groupring", help="cyclic group-ring checks")
    g.add_argument("--base", required=True, help="base ring descriptor")
    g.add_argument("--order", type=int, required=True, help="cyclic group order")
    g.add_argument("--op", required=True, choices=("clean", "twogood", "invert"))
    g.add_argument("--element", required=True, help="group-ring element string")
    g.set_defaults(handler=_cmd_groupring)

    s = sub.add_parser("sigma", help="is doubling mod m a single full cycle")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(handler=_cmd_sigma)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = _seed()
    except InputError as exc:
        print("\n".join(["cleandecomp report", f"input error (BadInput): {exc}"]))
        return 2
    try:
        lines, code = args.handler(args)
    except InputError as exc:
        print("\n".join(_header(seed) + [f"input error ({type(exc).__name__}): {exc}"]))
        return 2
    except CleanDecompError as exc:
        print("\n".join(_header(seed) + [f"error ({type(exc).__name__}): {exc}"]))
        return 1
    print("\n".join(_header(seed) + lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
