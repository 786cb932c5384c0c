"""Cyclic group rings over local bases: idempotent catalogs, clean checks,
and sums of two units.

The group ring of a cyclic group of order m over the rationals splits,
one factor per divisor d of m, along the cyclotomic factorization of
X^m - 1.  The primitive idempotent for d is computed by the extended
Euclidean algorithm on (phi_d, (X^m - 1)/phi_d) and mapped into the group
ring by folding exponents mod m; subset sums of primitive idempotents
enumerate every idempotent of the rational group ring.  Localized group
rings inherit exactly the catalog entries whose coefficient denominators
avoid the localized primes, because an idempotent of the localized ring
is in particular an idempotent of the rational one.

Cleanness over a one-prime localization is therefore decidable by trying
each admissible catalog idempotent e and testing a - e for invertibility.

The two-unit sum construction halves the problem: h = (a+1)/2 reduces mod
p to the residue group ring F_p C_n, a catalog idempotent whose image
makes h-bar - e-bar invertible lifts verbatim (its denominators divide n
and p does not), and a = (2e - 1) + 2(h - e) with both summands units.
When no catalog image works (the residue ring can have idempotents that
do not lift, since a cyclotomic factor may split further mod p), the
construction falls back to lifting a direct unit pair found in F_p C_n,
which always exists there for odd p with p not dividing n.  Either way
the result is verified by explicit inversion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from gmpy2 import mpq

from .errors import (
    BadFactorization,
    BadInput,
    DescriptorMismatch,
    InternalPatternViolation,
    NotAUnit,
    NotInvertible,
    TooLarge,
    TwoNotInvertible,
    UnsupportedOrder,
    UnsupportedRing,
)
from .finite import enumerate_ring
from .rings import (
    Element,
    GroupRing,
    IntegersMod,
    LocalizedIntegers,
    RationalField,
    Ring,
    UnitWitness,
    _is_prime,
)

MPQ_ZERO = mpq(0)
MPQ_ONE = mpq(1)


# ---------------------------------------------------------------------------
# sigma and brute-force idempotents over F2


def sigma_is_cyclic(m: int) -> bool:
    """Whether doubling mod m is one (m-1)-cycle on {1, ..., m-1}.

    Doubling is a permutation of {1, ..., m-1} only for odd m, hence the
    precondition.  Cyclic means the orbit of 1 already has size m-1,
    equivalently 2 has multiplicative order m-1 mod m.
    """
    if not isinstance(m, int) or m < 3 or m % 2 == 0:
        raise BadInput(f"doubling permutes 1..m-1 only for odd m >= 3, got {m!r}")
    i = 2 % m
    size = 1
    while i != 1:
        i = (2 * i) % m
        size += 1
    return size == m - 1


def enumerate_idempotents_f2(m: int):
    """All idempotents of the group ring of C_m over the two-element field,
    by exhaustive squaring of every coefficient vector."""
    if not isinstance(m, int) or m < 1:
        raise BadInput(f"group order must be >= 1, got {m!r}")
    if 2**m > 2**20:
        raise TooLarge(f"2^{m} coefficient vectors exceed the enumeration cap")
    ring = GroupRing(IntegersMod(2), m)
    mul = ring.mul
    return tuple(x for x in ring.elements() if mul(x, x) == x)


# ---------------------------------------------------------------------------
# explicit idempotents when the order is invertible


def explicit_idempotents(m: int, base: Ring):
    """(0, 1, f3, f4) where f3 averages the group elements and f4 = 1 - f3.

    f3 = (1 + g + ... + g^(m-1))/m needs m invertible in the base.  Both
    f3 and f4 are verified idempotent before returning.
    """
    if not isinstance(m, int) or m < 1:
        raise BadInput(f"group order must be >= 1, got {m!r}")
    try:
        m_inv = base.try_invert_payload(base.from_int(m))
    except NotAUnit:
        raise NotInvertible(f"{m} is not a unit in {base}") from None
    ring = GroupRing(base, m)
    f3 = tuple(m_inv for _ in range(m))
    f4 = ring.sub(ring.one, f3)
    if ring.mul(f3, f3) != f3 or ring.mul(f4, f4) != f4:
        raise InternalPatternViolation("averaging idempotent failed its square check")
    return (
        Element(ring, ring.zero),
        Element(ring, ring.one),
        Element(ring, f3),
        Element(ring, f4),
    )


# ---------------------------------------------------------------------------
# rational polynomial helpers (payloads are trimmed mpq tuples)


def _poly_trim(c: list) -> tuple:
    k = len(c)
    while k and c[k - 1] == MPQ_ZERO:
        k -= 1
    return tuple(c[:k])


def _poly_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [MPQ_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == MPQ_ZERO:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_sub(a: tuple, b: tuple) -> tuple:
    out = [MPQ_ZERO] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _poly_trim(out)


def _poly_divmod(a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise BadInput("polynomial division by zero")
    r = list(a)
    q = [MPQ_ZERO] * max(0, len(a) - len(b) + 1)
    lead_inv = 1 / b[-1]
    while True:
        while r and r[-1] == MPQ_ZERO:
            r.pop()
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        f = r[-1] * lead_inv
        q[k] = f
        for i, c in enumerate(b):
            r[k + i] -= f * c
    return _poly_trim(q), _poly_trim(r)


def _poly_xgcd(a: tuple, b: tuple) -> tuple[tuple, tuple, tuple]:
    """Monic gcd g with s*a + t*b = g, over the rationals."""
    old_r, r = a, b
    old_s, s = (MPQ_ONE,), ()
    old_t, t = (), (MPQ_ONE,)
    while r:
        quot, rem = _poly_divmod(old_r, r)
        old_r, r = r, rem
        old_s, s = s, _poly_sub(old_s, _poly_mul(quot, s))
        old_t, t = t, _poly_sub(old_t, _poly_mul(quot, t))
    if not old_r:
        return (), old_s, old_t
    scale = (1 / old_r[-1],)
    return (
        _poly_mul(old_r, scale),
        _poly_mul(old_s, scale),
        _poly_mul(old_t, scale),
    )


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> tuple:
    """The d-th cyclotomic polynomial over Q, by exact recursive division."""
    if not isinstance(d, int) or d < 1:
        raise BadInput(f"cyclotomic index must be >= 1, got {d!r}")
    num = (-MPQ_ONE,) + (MPQ_ZERO,) * (d - 1) + (MPQ_ONE,)  # X^d - 1
    den: tuple = (MPQ_ONE,)
    for e in range(1, d):
        if d % e == 0:
            den = _poly_mul(den, cyclotomic(e))
    quot, rem = _poly_divmod(num, den)
    if rem:
        raise InternalPatternViolation("cyclotomic division left a remainder")
    return quot


# ---------------------------------------------------------------------------
# the rational idempotent catalog


@dataclass(frozen=True)
class CatalogEntry:
    """One idempotent of the rational group ring: a subset sum of
    primitive idempotents, tagged by the divisors it covers."""

    divisors: tuple[int, ...]
    coefficients: tuple  # m rational coefficients

    def admissible_over(self, primes: tuple[int, ...]) -> bool:
        return all(
            all(c.denominator % p for p in primes) for c in self.coefficients
        )


@dataclass(frozen=True)
class IdempotentCatalog:
    order: int
    divisors: tuple[int, ...]
    primitive: tuple[CatalogEntry, ...]  # one per divisor, same order
    entries: tuple[CatalogEntry, ...]  # all subset sums, by (size, subset)

    def localized_members(self, primes: tuple[int, ...]) -> tuple[CatalogEntry, ...]:
        return tuple(e for e in self.entries if e.admissible_over(primes))


@lru_cache(maxsize=None)
def rational_idempotents(m: int) -> IdempotentCatalog:
    """Every idempotent of the rational group ring of C_m.

    For each divisor d the primitive idempotent is 1 mod phi_d and 0 mod
    the cofactor, found by the extended Euclidean algorithm and folded
    into m coefficients via X^m = 1.  All 2^(number of divisors) subset
    sums follow.
    """
    if not isinstance(m, int) or m < 1:
        raise BadInput(f"group order must be >= 1, got {m!r}")
    xm1 = (-MPQ_ONE,) + (MPQ_ZERO,) * (m - 1) + (MPQ_ONE,)
    divisors = tuple(d for d in range(1, m + 1) if m % d == 0)
    primitive = []
    for d in divisors:
        phi = cyclotomic(d)
        cof, rem = _poly_divmod(xm1, phi)
        if rem:
            raise InternalPatternViolation("cyclotomic cofactor division failed")
        g, s, t = _poly_xgcd(phi, cof)
        if g != (MPQ_ONE,):
            raise InternalPatternViolation("cyclotomic factors were not coprime")
        prod = _poly_mul(t, cof)
        coeffs = [MPQ_ZERO] * m
        for k, c in enumerate(prod):
            coeffs[k % m] += c
        primitive.append(CatalogEntry((d,), tuple(coeffs)))
    by_divisor = dict(zip(divisors, primitive))
    entries = []
    for size in range(len(divisors) + 1):
        for subset in itertools.combinations(divisors, size):
            coeffs = [MPQ_ZERO] * m
            for d in subset:
                for k, c in enumerate(by_divisor[d].coefficients):
                    coeffs[k] += c
            entries.append(CatalogEntry(subset, tuple(coeffs)))
    return IdempotentCatalog(m, divisors, tuple(primitive), tuple(entries))


# ---------------------------------------------------------------------------
# inversion and clean checks


def unit_invert_groupring(a: Element) -> UnitWitness:
    """Two-sided inverse in a cyclic group ring via the circulant solve."""
    if not isinstance(a.ring, GroupRing):
        raise DescriptorMismatch(f"not a group-ring element: {a.ring}")
    return a.try_invert()


def _require_one_prime_localized(ring: Ring) -> int:
    if not isinstance(ring, GroupRing):
        raise DescriptorMismatch(f"not a group-ring element: {ring}")
    base = ring.base
    if not isinstance(base, LocalizedIntegers) or len(base.primes) != 1:
        raise UnsupportedRing(
            f"this check needs a one-prime localized base, got {base}"
        )
    return base.primes[0]


def clean_check_localized(a: Element):
    """Decide 1-cleanness of ``a`` over a one-prime localized group ring.

    The admissible catalog entries are all idempotents this ring has, so
    trying each one against invertibility of a - e is a complete decision
    procedure.  Returns (True, (e, witness)) or (False, None).
    """
    p = _require_one_prime_localized(a.ring)
    ring: GroupRing = a.ring
    catalog = rational_idempotents(ring.order)
    for entry in catalog.localized_members((p,)):
        e = Element(ring, ring.canonical(entry.coefficients))
        try:
            w = (a - e).try_invert()
        except NotAUnit:
            continue
        return True, (e, w)
    return False, None


def _reduce_mpq_mod(c: mpq, p: int) -> int:
    den = int(c.denominator)
    if den % p == 0:
        raise BadInput(f"denominator of {c} is not invertible mod {p}")
    return (int(c.numerator) * pow(den, -1, p)) % p


def reduce_mod_p(a: Element, p: int) -> Element:
    """Coefficientwise reduction of a localized group-ring element mod p."""
    ring: GroupRing = a.ring
    target = GroupRing(IntegersMod(p), ring.order)
    return Element(target, tuple(_reduce_mpq_mod(c, p) for c in a.value))


def two_good_group_ring(a: Element) -> tuple[UnitWitness, UnitWitness]:
    """Write ``a`` as a sum of two units over Zloc:p C_n, p odd, p not | n.

    Primary route: h = (a+1)/2, pick a catalog idempotent e whose mod-p
    image leaves h-bar - e-bar invertible; then a = (2e-1) + 2(h-e).  The
    first summand is its own inverse and the second is a unit because its
    residue is (a unit image is enough over a localized base: the
    circulant determinant is a p-adic unit).  Fallback when no catalog
    image works: lift a direct unit pair found exhaustively in the
    residue ring.
    """
    p = _require_one_prime_localized(a.ring)
    ring: GroupRing = a.ring
    n = ring.order
    if p == 2:
        raise TwoNotInvertible("2 is not invertible when localizing at 2")
    if n % p == 0:
        raise UnsupportedOrder(
            f"group order {n} divisible by the localized prime {p}; "
            "split the group with regroup_iso first"
        )
    half = mpq(1, 2)
    one = Element(ring, ring.one)
    h = Element(ring, tuple(c * half for c in (a + one).value))
    hbar = reduce_mod_p(h, p)
    fp_ring: GroupRing = hbar.ring

    catalog = rational_idempotents(n)
    for entry in catalog.localized_members((p,)):
        ebar = tuple(_reduce_mpq_mod(c, p) for c in entry.coefficients)
        diff = fp_ring.sub(hbar.value, ebar)
        try:
            fp_ring.try_invert_payload(diff)
        except NotAUnit:
            continue
        e_lift = Element(ring, ring.canonical(entry.coefficients))
        u1 = e_lift + e_lift - one
        u2_el = (h - e_lift) + (h - e_lift)
        try:
            w2 = u2_el.try_invert()
        except NotAUnit:
            continue  # cannot happen for a true residue unit; stay honest
        w1 = UnitWitness(u1, u1, None)
        if not w1.verify() or u1 + u2_el != a:
            raise InternalPatternViolation("halving construction failed to verify")
        return w1, w2

    # No catalog idempotent has a usable image: the residue ring gained
    # idempotents that do not lift.  Sum two residue units instead; any
    # coefficientwise lift of a residue unit is a unit.
    abar = reduce_mod_p(a, p)
    table = enumerate_ring(fp_ring)
    unit_set = table.unit_set()
    for ubar in table.units:
        diff = fp_ring.sub(abar.value, ubar)
        if diff not in unit_set:
            continue
        u1_el = Element(ring, tuple(mpq(c) for c in ubar))
        u2_el = a - u1_el
        try:
            w1 = u1_el.try_invert()
            w2 = u2_el.try_invert()
        except NotAUnit:
            continue
        return w1, w2
    raise InternalPatternViolation(
        "a residue group ring of odd characteristic refused every unit pair"
    )


# ---------------------------------------------------------------------------
# regrouping a cyclic group across a prime power


@dataclass(frozen=True)
class RegroupIso:
    """The coefficient re-indexing realizing C_n = C_(p^k) x C_m.

    Index i of the length-n coefficient vector lands at inner index
    i mod p^k and outer index i mod m; with gcd(p^k, m) = 1 this is a
    bijection and convolution mod n becomes nested convolution.
    """

    n: int
    p: int
    k: int
    m: int

    @property
    def prime_power(self) -> int:
        return self.p**self.k

    def split_index(self, i: int) -> tuple[int, int]:
        return i % self.prime_power, i % self.m

    def nested_ring(self, base: Ring) -> GroupRing:
        return GroupRing(GroupRing(base, self.prime_power), self.m)

    def to_nested(self, a: Element) -> Element:
        ring = a.ring
        if not isinstance(ring, GroupRing) or ring.order != self.n:
            raise DescriptorMismatch(f"expected a group ring of order {self.n}")
        base = ring.base
        pk = self.prime_power
        inner_zero = base.zero
        grid = [[inner_zero] * pk for _ in range(self.m)]
        for i, c in enumerate(a.value):
            ai, bi = self.split_index(i)
            grid[bi][ai] = c
        nested = self.nested_ring(base)
        return Element(nested, tuple(tuple(row) for row in grid))

    def from_nested(self, a: Element) -> Element:
        nested_shape = (
            isinstance(a.ring, GroupRing)
            and a.ring.order == self.m
            and isinstance(a.ring.base, GroupRing)
            and a.ring.base.order == self.prime_power
        )
        if not nested_shape:
            raise DescriptorMismatch(
                f"expected a group ring of order {self.m} over one of order "
                f"{self.prime_power}"
            )
        base = a.ring.base.base
        flat = [base.zero] * self.n
        for bi, row in enumerate(a.value):
            for ai, c in enumerate(row):
                # unique i mod n with i = ai mod p^k and i = bi mod m
                pk = self.prime_power
                t = ((bi - ai) * pow(pk, -1, self.m)) % self.m
                flat[ai + pk * t] = c
        return Element(GroupRing(base, self.n), tuple(flat))


def regroup_iso(n: int, p: int) -> RegroupIso:
    """Split the order as n = p^k * m with p prime and p not dividing m."""
    if not isinstance(n, int) or n < 1:
        raise BadInput(f"group order must be >= 1, got {n!r}")
    if not isinstance(p, int) or not _is_prime(p):
        raise BadFactorization(f"{p!r} is not prime")
    if n % p != 0:
        raise BadFactorization(f"{p} does not divide the group order {n}")
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    return RegroupIso(n, p, k, m)
