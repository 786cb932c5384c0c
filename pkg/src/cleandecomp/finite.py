"""Brute-force ground truth on finite rings.

This module is deliberately unclever: enumerate every element, find the
units by attempting inversion, find the idempotents by squaring, and
answer n-cleanness questions by exhaustive search.  The constructive
algorithms elsewhere in the package are cross-validated against these
tables, so nothing here may depend on those algorithms.

Pierce decomposition is realized concretely: ideals generated by central
idempotents are explicit element subsets (for a central idempotent c the
ideal is exactly cR, and joins of central idempotents give all ideals
generated by sets of them), the maximal proper ones are selected by
inclusion, and each quotient is materialized as a small ring of coset
representatives that supports the same enumeration interface.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import NotFinite, TooLarge
from .rings import Element, Ring, UnitWitness

ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class FiniteRingTable:
    """Complete element/unit/idempotent listing of one finite ring."""

    ring: Ring
    elements: tuple
    units: tuple
    idempotents: tuple
    central_idempotents: tuple

    def unit_set(self) -> frozenset:
        return frozenset(self.units)

    def order(self) -> int:
        return len(self.elements)


def enumerate_ring(ring: Ring) -> FiniteRingTable:
    """Materialize a finite ring's table; NotFinite/TooLarge otherwise."""
    card = ring.cardinality()
    if card is None:
        raise NotFinite(f"{ring} is not a finite ring")
    if card > ENUMERATION_CAP:
        raise TooLarge(f"{ring} has {card} elements, over the cap {ENUMERATION_CAP}")
    elements = tuple(ring.elements())
    units = []
    for x in elements:
        try:
            ring.try_invert_payload(x)
        except Exception:
            continue
        units.append(x)
    mul = ring.mul
    idempotents = tuple(x for x in elements if mul(x, x) == x)
    central = tuple(
        e
        for e in idempotents
        if all(mul(e, x) == mul(x, e) for x in elements)
    )
    return FiniteRingTable(ring, elements, tuple(units), idempotents, central)


# ---------------------------------------------------------------------------
# n-clean searches


def is_element_n_clean(
    a, n: int, table: FiniteRingTable
) -> tuple[bool, Optional[tuple]]:
    """Exhaustive n-clean test for one element (payload) of a finite ring.

    Searches idempotent e and a multiset of n-1 units, solving for the
    last unit as a - e - (the others); every solution multiset is reached
    this way.  Returns (True, (e, (u_1, ..., u_n))) on success.
    """
    ring = table.ring
    sub = ring.sub
    unit_set = table.unit_set()
    for e in table.idempotents:
        rest = sub(a, e)
        for combo in itertools.combinations_with_replacement(table.units, n - 1):
            last = rest
            for u in combo:
                last = sub(last, u)
            if last in unit_set:
                return True, (e, combo + (last,))
    return False, None


def oracle_witness_decomposition(table: FiniteRingTable, a, witness):
    """Turn an oracle witness into a verified element-level decomposition."""
    from .decompose import CleanDecomposition

    ring = table.ring
    e, units = witness
    unit_witnesses = tuple(
        UnitWitness(
            Element(ring, u), Element(ring, ring.try_invert_payload(u)), None
        )
        for u in units
    )
    return CleanDecomposition(
        target=Element(ring, a),
        idempotent=Element(ring, e),
        units=unit_witnesses,
    )


def ring_n_clean(table: FiniteRingTable, n: int) -> tuple[bool, Optional[object]]:
    """Whether every element is n-clean; the first failing payload if not."""
    for a in table.elements:
        ok, _ = is_element_n_clean(a, n, table)
        if not ok:
            return False, a
    return True, None


def integer_n_clean_check(a: int, n: int) -> bool:
    """n-cleanness of an integer, complete because U(Z) = {1, -1}.

    a = e + (sum of n signs) with e in {0, 1}, so the test is a parity
    and range check on a - e.
    """
    if n < 1:
        return False
    for e in (0, 1):
        d = a - e
        if abs(d) <= n and (d - n) % 2 == 0:
            return True
    return False


# ---------------------------------------------------------------------------
# Pierce stalks


@dataclass(frozen=True)
class PierceIdeal:
    """A maximal proper ideal generated by central idempotents."""

    elements: frozenset
    generators: tuple  # the central idempotents whose span is this ideal


@dataclass(frozen=True)
class PierceStalkReport:
    ring: Ring
    ideals: tuple[PierceIdeal, ...]
    stalks: tuple[FiniteRingTable, ...]


class _QuotientRing(Ring):
    """R/I for an explicit two-sided ideal I of a finite ring.

    Payloads are coset representatives: the earliest element of the coset
    in the parent's enumeration order.  Inversion is brute force, which is
    fine at the sizes Pierce stalks take here.
    """

    def __init__(self, parent: Ring, ideal: frozenset, parent_elements: tuple):
        self.parent = parent
        self.ideal = ideal
        index = {x: i for i, x in enumerate(parent_elements)}
        rep_of: dict = {}
        reps = []
        add = parent.add
        for x in parent_elements:
            if x in rep_of:
                continue
            coset = sorted((add(x, d) for d in ideal), key=index.__getitem__)
            rep = coset[0]
            reps.append(rep)
            for y in coset:
                rep_of[y] = rep
        self._rep_of = rep_of
        self._elements = tuple(reps)

    @property
    def zero(self):
        return self._rep_of[self.parent.zero]

    @property
    def one(self):
        return self._rep_of[self.parent.one]

    def add(self, a, b):
        return self._rep_of[self.parent.add(a, b)]

    def sub(self, a, b):
        return self._rep_of[self.parent.sub(a, b)]

    def mul(self, a, b):
        return self._rep_of[self.parent.mul(a, b)]

    def neg(self, a):
        return self._rep_of[self.parent.neg(a)]

    def from_int(self, k):
        return self._rep_of[self.parent.from_int(k)]

    def canonical(self, raw):
        return self._rep_of[self.parent.canonical(raw)]

    def parse(self, text):
        return self._rep_of[self.parent.parse(text)]

    def fmt(self, a):
        return self.parent.fmt(a)

    def try_invert_payload(self, a):
        from .errors import NotAUnit

        one = self.one
        mul = self.mul
        for y in self._elements:
            if mul(a, y) == one and mul(y, a) == one:
                return y
        raise NotAUnit(f"{self.parent.fmt(a)} is not invertible in the quotient")

    def cardinality(self):
        return len(self._elements)

    def elements(self):
        return iter(self._elements)

    def __str__(self):
        return f"{self.parent}/({len(self.ideal)}-element ideal)"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


def pierce_stalks(table: FiniteRingTable) -> PierceStalkReport:
    """Maximal proper ideals generated by central idempotents, with quotients.

    The ideal generated by a set of central idempotents equals cR for the
    join c of the set (joins of central idempotents are again central
    idempotents), so candidates are exactly the spans of single central
    idempotents other than 1.
    """
    ring = table.ring
    mul = ring.mul
    spans: dict = {}
    for c in table.central_idempotents:
        span = frozenset(mul(c, x) for x in table.elements)
        if ring.one in span:
            continue  # cR = R exactly when c = 1
        spans.setdefault(span, []).append(c)
    maximal = [
        span
        for span in spans
        if not any(other != span and span < other for other in spans)
    ]
    maximal.sort(key=lambda s: (len(s), sorted(map(str, map(ring.fmt, s)))))
    ideals = []
    stalks = []
    for span in maximal:
        ideals.append(PierceIdeal(span, tuple(spans[span])))
        q = _QuotientRing(ring, span, table.elements)
        stalks.append(enumerate_ring(q))
    return PierceStalkReport(ring, tuple(ideals), tuple(stalks))
