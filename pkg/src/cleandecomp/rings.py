"""Exact arithmetic over a small tower of ring constructions.

Every ring is a frozen dataclass describing one of seven kinds: the
integers, the rationals, integers modulo n, integers localized away from a
finite set of primes, polynomials over a base ring, square matrices over a
base ring, and cyclic group rings over a base ring.  A ring object does the
actual arithmetic on plain hashable payloads:

  Integers            int
  Rationals           gmpy2.mpq (always reduced, positive denominator)
  IntegersMod(n)      int in [0, n)
  LocalizedIntegers   gmpy2.mpq whose denominator avoids the listed primes
  PolynomialRing      tuple of base payloads, no trailing zero coefficient
  MatrixRing(R, s)    tuple of s row tuples of s base payloads
  GroupRing(R, n)     tuple of exactly n base payloads (coefficient of g^i)

``Element`` pairs a ring with a payload and carries operator overloads, so
formula-heavy callers can write ``a*b - two*c`` while bulk callers (matrix
kernels, enumerations) stay on raw payloads for speed.  All equality is
structural equality of canonical payloads; nothing in here is approximate.

Inversion is always two-sided and verified.  For matrix and group-ring
elements it goes through unit-pivot elimination, routed through the
rationals for integer and localized bases and through a prime-power
splitting for composite moduli, so failure really means "not a unit" for
every base ring this package ships.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterator, Optional

from gmpy2 import mpq

from .errors import (
    BadInput,
    DenominatorNotUnit,
    DescriptorMismatch,
    NotAUnit,
    ParseError,
    UnsupportedRing,
)

MPQ_ZERO = mpq(0)
MPQ_ONE = mpq(1)

_INT_RE = re.compile(r"^-?[0-9]+$")
_RAT_RE = re.compile(r"^-?[0-9]+(/[1-9][0-9]*)?$")
_VAR_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorint(n: int) -> dict[int, int]:
    """Prime factorization by trial division; inputs here are desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _crt(residues: list[int], moduli: list[int]) -> int:
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside any (), [], {} nesting."""
    parts: list[str] = []
    depth = 0
    start = 0
    i = 0
    L = len(sep)
    while i < len(text):
        ch = text[i]
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            start = i + L
            i += L
            continue
        i += 1
    parts.append(text[start:])
    return parts


class Ring:
    """Shared behavior; concrete kinds override the payload primitives."""

    # -- payload arithmetic ------------------------------------------------
    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def from_int(self, k: int):
        raise NotImplementedError

    # -- canonical form, text grammar --------------------------------------
    def canonical(self, raw):
        """Validate ``raw`` as a payload and return its canonical form."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    # -- structure ----------------------------------------------------------
    def try_invert_payload(self, a):
        """Return the two-sided inverse payload or raise NotAUnit."""
        raise NotImplementedError

    def is_idempotent_payload(self, a) -> bool:
        return self.mul(a, a) == a

    def jacobson_member_payload(self, a) -> bool:
        raise UnsupportedRing(
            f"Jacobson radical membership is not supported over {format_descriptor(self)}"
        )

    def is_local(self) -> bool:
        """True when units are exactly the elements outside a unique maximal ideal."""
        return False

    def is_commutative(self) -> bool:
        return True

    def cardinality(self) -> Optional[int]:
        return None

    def elements(self) -> Iterator:
        from .errors import NotFinite

        raise NotFinite(f"{format_descriptor(self)} is not a finite ring")

    def random_payload(self, rng):
        raise NotImplementedError

    # -- conveniences --------------------------------------------------------
    def el(self, raw) -> "Element":
        return Element(self, self.canonical(raw))

    def one_el(self) -> "Element":
        return Element(self, self.one)

    def zero_el(self) -> "Element":
        return Element(self, self.zero)

    def __str__(self) -> str:
        return format_descriptor(self)


@dataclass(frozen=True)
class IntegerRing(Ring):
    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, k):
        return k

    def canonical(self, raw):
        if isinstance(raw, bool) or not isinstance(raw, int):
            if isinstance(raw, mpq) and raw.denominator == 1:
                return int(raw.numerator)
            raise ParseError(f"not an integer payload: {raw!r}")
        return raw

    def parse(self, text):
        if not _INT_RE.match(text):
            raise ParseError(f"bad integer literal: {text!r}")
        return int(text)

    def fmt(self, a):
        return str(a)

    def try_invert_payload(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not invertible over Z")

    def random_payload(self, rng):
        return rng.randint(-9, 9)


@dataclass(frozen=True)
class RationalField(Ring):
    @property
    def zero(self):
        return MPQ_ZERO

    @property
    def one(self):
        return MPQ_ONE

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, k):
        return mpq(k)

    def canonical(self, raw):
        if isinstance(raw, bool):
            raise ParseError(f"not a rational payload: {raw!r}")
        if isinstance(raw, (int, mpq)):
            return mpq(raw)
        raise ParseError(f"not a rational payload: {raw!r}")

    def parse(self, text):
        if not _RAT_RE.match(text):
            raise ParseError(f"bad rational literal: {text!r}")
        return mpq(text)

    def fmt(self, a):
        return str(a)

    def try_invert_payload(self, a):
        if a == 0:
            raise NotAUnit("0 is not invertible over Q")
        return 1 / a

    def is_local(self) -> bool:
        return True

    def random_payload(self, rng):
        return mpq(rng.randint(-9, 9), rng.randint(1, 9))


@dataclass(frozen=True)
class IntegersMod(Ring):
    modulus: int

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise BadInput(f"modulus must be an integer >= 2, got {self.modulus!r}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def from_int(self, k):
        return k % self.modulus

    def canonical(self, raw):
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ParseError(f"not a residue payload: {raw!r}")
        return raw % self.modulus

    def parse(self, text):
        if not _INT_RE.match(text):
            raise ParseError(f"bad residue literal: {text!r}")
        return int(text) % self.modulus

    def fmt(self, a):
        return str(a)

    def try_invert_payload(self, a):
        try:
            return pow(a, -1, self.modulus)
        except ValueError:
            raise NotAUnit(f"{a} is not invertible modulo {self.modulus}") from None

    def jacobson_member_payload(self, a) -> bool:
        fac = _factorint(self.modulus)
        if len(fac) != 1:
            raise UnsupportedRing(
                f"radical membership needs a prime-power modulus, got {self.modulus}"
            )
        (p,) = fac
        return a % p == 0

    def is_local(self) -> bool:
        return len(_factorint(self.modulus)) == 1

    def is_nilpotent_payload(self, a) -> bool:
        x = a % self.modulus
        for _ in range(self.modulus.bit_length() + 1):
            if x == 0:
                return True
            x = x * x % self.modulus
        return x == 0

    def cardinality(self):
        return self.modulus

    def elements(self):
        return iter(range(self.modulus))

    def random_payload(self, rng):
        return rng.randrange(self.modulus)


@dataclass(frozen=True)
class LocalizedIntegers(Ring):
    """Rationals whose reduced denominator avoids every listed prime."""

    primes: tuple[int, ...]

    def __post_init__(self):
        primes = tuple(self.primes)
        if not primes:
            raise BadInput("localization needs at least one prime")
        if len(set(primes)) != len(primes):
            raise BadInput(f"localization primes must be distinct: {primes}")
        for p in primes:
            if not isinstance(p, int) or not _is_prime(p):
                raise BadInput(f"{p!r} is not prime")
        object.__setattr__(self, "primes", tuple(sorted(primes)))

    @property
    def zero(self):
        return MPQ_ZERO

    @property
    def one(self):
        return MPQ_ONE

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, k):
        return mpq(k)

    def admissible(self, a: mpq) -> bool:
        den = a.denominator
        return all(den % p for p in self.primes)

    def canonical(self, raw):
        if isinstance(raw, bool):
            raise ParseError(f"not a localized payload: {raw!r}")
        if not isinstance(raw, (int, mpq)):
            raise ParseError(f"not a localized payload: {raw!r}")
        v = mpq(raw)
        if not self.admissible(v):
            raise DenominatorNotUnit(
                f"denominator of {v} is divisible by one of {self.primes}"
            )
        return v

    def parse(self, text):
        if not _RAT_RE.match(text):
            raise ParseError(f"bad rational literal: {text!r}")
        return self.canonical(mpq(text))

    def fmt(self, a):
        return str(a)

    def try_invert_payload(self, a):
        if a == 0:
            raise NotAUnit("0 is not invertible")
        num = a.numerator
        if any(num % p == 0 for p in self.primes):
            raise NotAUnit(f"numerator of {a} hits a localized prime of {self.primes}")
        return 1 / a

    def jacobson_member_payload(self, a) -> bool:
        num = a.numerator
        return all(num % p == 0 for p in self.primes)

    def is_local(self) -> bool:
        return len(self.primes) == 1

    def random_payload(self, rng):
        allowed = [q for q in (2, 3, 5, 7, 11, 13) if q not in self.primes]
        den = rng.choice([1, 1, allowed[0], allowed[1 % len(allowed)]])
        return mpq(rng.randint(-9, 9), den)


@dataclass(frozen=True)
class PolynomialRing(Ring):
    base: Ring
    var: str

    def __post_init__(self):
        if not _VAR_RE.match(self.var):
            raise BadInput(f"bad variable name {self.var!r}")

    @cached_property
    def zero(self):
        return ()

    @cached_property
    def one(self):
        return (self.base.one,)

    def _trim(self, coeffs: tuple) -> tuple:
        bz = self.base.zero
        k = len(coeffs)
        while k and coeffs[k - 1] == bz:
            k -= 1
        return coeffs[:k]

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return a
        badd = self.base.add
        out = list(a)
        for i, c in enumerate(b):
            out[i] = badd(out[i], c)
        # the leading coefficient can only cancel on equal degrees
        if len(a) == len(b):
            return self._trim(tuple(out))
        return tuple(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        bneg = self.base.neg
        return tuple(bneg(c) for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        bz = self.base.zero
        badd, bmul = self.base.add, self.base.mul
        out = [bz] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == bz:
                continue
            for j, cb in enumerate(b):
                if cb == bz:
                    continue
                out[i + j] = badd(out[i + j], bmul(ca, cb))
        return self._trim(tuple(out))

    def from_int(self, k):
        return self._trim((self.base.from_int(k),))

    def canonical(self, raw):
        try:
            seq = tuple(raw)
        except TypeError:
            raise ParseError(f"not a coefficient sequence: {raw!r}") from None
        return self._trim(tuple(self.base.canonical(c) for c in seq))

    def degree(self, a) -> int:
        """Degree with the convention that the zero polynomial has degree -1."""
        return len(a) - 1

    def parse(self, text):
        coeffs = _parse_terms(text, self.base, self.var)
        out = [self.base.zero] * (max(coeffs) + 1 if coeffs else 0)
        for k, c in coeffs.items():
            out[k] = self.base.add(out[k], c)
        return self._trim(tuple(out))

    def fmt(self, a):
        if not a:
            return self.base.fmt(self.base.zero)
        return " + ".join(
            _fmt_term(self.base, c, self.var, k) for k, c in enumerate(a)
        )

    def try_invert_payload(self, a):
        if len(a) == 1:
            return (self.base.try_invert_payload(a[0]),)
        if not a:
            raise NotAUnit("0 is not invertible")
        # Degree > 0 can only be a unit when every higher coefficient is
        # nilpotent; that test is available over IntegersMod bases.
        if isinstance(self.base, IntegersMod) and all(
            self.base.is_nilpotent_payload(c) for c in a[1:]
        ):
            lead_inv = (self.base.try_invert_payload(a[0]),)
            nil = (self.base.zero,) + a[1:]
            inv = lead_inv
            term = lead_inv
            for _ in range(len(a) * self.base.modulus.bit_length() + 2):
                term = self.neg(self.mul(self.mul(lead_inv, nil), term))
                if not term:
                    return inv
                inv = self.add(inv, term)
        raise NotAUnit(f"{self.fmt(a)} is not a recognized unit of {self}")

    def random_payload(self, rng):
        deg = rng.randrange(3)
        return self._trim(
            tuple(self.base.random_payload(rng) for _ in range(deg + 1))
        )

    def is_commutative(self) -> bool:
        return self.base.is_commutative()


@dataclass(frozen=True)
class MatrixRing(Ring):
    base: Ring
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise BadInput(f"matrix size must be >= 1, got {self.size!r}")

    @cached_property
    def zero(self):
        bz = self.base.zero
        s = self.size
        return tuple(tuple(bz for _ in range(s)) for _ in range(s))

    @cached_property
    def one(self):
        bz, bo = self.base.zero, self.base.one
        s = self.size
        return tuple(
            tuple(bo if i == j else bz for j in range(s)) for i in range(s)
        )

    def add(self, a, b):
        badd = self.base.add
        if self.size == 2:
            (a00, a01), (a10, a11) = a
            (b00, b01), (b10, b11) = b
            return (
                (badd(a00, b00), badd(a01, b01)),
                (badd(a10, b10), badd(a11, b11)),
            )
        return tuple(
            tuple(badd(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
        )

    def sub(self, a, b):
        bsub = self.base.sub
        if self.size == 2:
            (a00, a01), (a10, a11) = a
            (b00, b01), (b10, b11) = b
            return (
                (bsub(a00, b00), bsub(a01, b01)),
                (bsub(a10, b10), bsub(a11, b11)),
            )
        return tuple(
            tuple(bsub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
        )

    def neg(self, a):
        bneg = self.base.neg
        return tuple(tuple(bneg(x) for x in row) for row in a)

    def mul(self, a, b):
        badd, bmul = self.base.add, self.base.mul
        if self.size == 2:
            (a00, a01), (a10, a11) = a
            (b00, b01), (b10, b11) = b
            return (
                (badd(bmul(a00, b00), bmul(a01, b10)), badd(bmul(a00, b01), bmul(a01, b11))),
                (badd(bmul(a10, b00), bmul(a11, b10)), badd(bmul(a10, b01), bmul(a11, b11))),
            )
        cols = tuple(zip(*b))
        out = []
        for row in a:
            orow = []
            for col in cols:
                acc = bmul(row[0], col[0])
                for x, y in zip(row[1:], col[1:]):
                    acc = badd(acc, bmul(x, y))
                orow.append(acc)
            out.append(tuple(orow))
        return tuple(out)

    def from_int(self, k):
        v = self.base.from_int(k)
        bz = self.base.zero
        s = self.size
        return tuple(
            tuple(v if i == j else bz for j in range(s)) for i in range(s)
        )

    def canonical(self, raw):
        try:
            rows = tuple(tuple(row) for row in raw)
        except TypeError:
            raise ParseError(f"not a matrix payload: {raw!r}") from None
        if len(rows) != self.size or any(len(r) != self.size for r in rows):
            raise ParseError(
                f"expected a {self.size}x{self.size} array, got {raw!r}"
            )
        return tuple(
            tuple(self.base.canonical(x) for x in row) for row in rows
        )

    def parse(self, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix literal: {exc}") from None
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise ParseError("matrix literal must be an array of arrays")
        if len(data) != self.size or any(len(r) != self.size for r in data):
            raise ParseError(f"expected a {self.size}x{self.size} array")
        return tuple(
            tuple(self.base.parse(_require_str(x)) for x in row) for row in data
        )

    def fmt(self, a):
        return json.dumps(
            [[self.base.fmt(x) for x in row] for row in a],
            separators=(",", ":"),
        )

    def try_invert_payload(self, a):
        inv = _invert_square_system(self.base, [list(r) for r in a])
        if inv is None and self.base.is_commutative():
            inv = _adjugate_inverse(self.base, a)
        if inv is None:
            raise NotAUnit("matrix has no inverse detectable by linear solve")
        inv_t = tuple(tuple(r) for r in inv)
        if self.mul(a, inv_t) != self.one or self.mul(inv_t, a) != self.one:
            raise NotAUnit("matrix has no two-sided inverse")
        return inv_t

    def jacobson_member_payload(self, a) -> bool:
        return all(
            self.base.jacobson_member_payload(x) for row in a for x in row
        )

    def cardinality(self):
        b = self.base.cardinality()
        return None if b is None else b ** (self.size * self.size)

    def is_commutative(self) -> bool:
        return self.size == 1 and self.base.is_commutative()

    def elements(self):
        if self.cardinality() is None:
            return super().elements()
        s = self.size
        base_elems = tuple(self.base.elements())
        return (
            tuple(flat[i * s : (i + 1) * s] for i in range(s))
            for flat in itertools.product(base_elems, repeat=s * s)
        )

    def random_payload(self, rng):
        s = self.size
        return tuple(
            tuple(self.base.random_payload(rng) for _ in range(s))
            for _ in range(s)
        )


@dataclass(frozen=True)
class GroupRing(Ring):
    """Group ring of the cyclic group of the given order; g is the generator."""

    base: Ring
    order: int

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise BadInput(f"group order must be >= 1, got {self.order!r}")

    @cached_property
    def zero(self):
        return (self.base.zero,) * self.order

    @cached_property
    def one(self):
        return (self.base.one,) + (self.base.zero,) * (self.order - 1)

    def add(self, a, b):
        badd = self.base.add
        return tuple(badd(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        bsub = self.base.sub
        return tuple(bsub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        bneg = self.base.neg
        return tuple(bneg(x) for x in a)

    def mul(self, a, b):
        n = self.order
        bz = self.base.zero
        badd, bmul = self.base.add, self.base.mul
        out = [bz] * n
        for i, ca in enumerate(a):
            if ca == bz:
                continue
            for j, cb in enumerate(b):
                k = i + j
                if k >= n:
                    k -= n
                out[k] = badd(out[k], bmul(ca, cb))
        return tuple(out)

    def from_int(self, k):
        return (self.base.from_int(k),) + (self.base.zero,) * (self.order - 1)

    def augmentation(self, a):
        """Sum of the coefficients."""
        acc = self.base.zero
        for c in a:
            acc = self.base.add(acc, c)
        return acc

    def canonical(self, raw):
        try:
            seq = tuple(raw)
        except TypeError:
            raise ParseError(f"not a coefficient sequence: {raw!r}") from None
        if len(seq) != self.order:
            raise ParseError(
                f"expected {self.order} coefficients, got {len(seq)}"
            )
        return tuple(self.base.canonical(c) for c in seq)

    def parse(self, text):
        coeffs = _parse_terms(text, self.base, "g")
        out = [self.base.zero] * self.order
        for k, c in coeffs.items():
            out[k % self.order] = self.base.add(out[k % self.order], c)
        return tuple(out)

    def fmt(self, a):
        return " + ".join(
            _fmt_term(self.base, c, "g", k) for k, c in enumerate(a)
        )

    def try_invert_payload(self, a):
        n = self.order
        rows = [[a[(k - j) % n] for j in range(n)] for k in range(n)]
        rhs = [[self.base.one if k == 0 else self.base.zero] for k in range(n)]
        sol = _solve_linear(self.base, rows, rhs)
        if sol is None:
            raise NotAUnit(f"{self.fmt(a)} is not invertible in {self}")
        cand = tuple(row[0] for row in sol)
        if self.mul(a, cand) != self.one or self.mul(cand, a) != self.one:
            raise NotAUnit(f"{self.fmt(a)} has no two-sided inverse")
        return cand

    def cardinality(self):
        b = self.base.cardinality()
        return None if b is None else b ** self.order

    def is_commutative(self) -> bool:
        # the group is cyclic, so only the base can break commutativity
        return self.base.is_commutative()

    def elements(self):
        if self.cardinality() is None:
            return super().elements()
        base_elems = tuple(self.base.elements())
        return itertools.product(base_elems, repeat=self.order)

    def random_payload(self, rng):
        return tuple(self.base.random_payload(rng) for _ in range(self.order))


# ---------------------------------------------------------------------------
# term grammar shared by polynomials and group rings


def _needs_parens(base: Ring) -> bool:
    return isinstance(base, (PolynomialRing, GroupRing))


def _fmt_term(base: Ring, coeff, var: str, power: int) -> str:
    c = base.fmt(coeff)
    if _needs_parens(base):
        c = f"({c})"
    if power == 0:
        return c
    if power == 1:
        return f"{c}*{var}"
    return f"{c}*{var}^{power}"


def _strip_parens(text: str) -> str:
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        depth = 0
        for i, ch in enumerate(t):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i != len(t) - 1:
                    return t
        return t[1:-1]
    return t


def _parse_terms(text: str, base: Ring, var: str) -> dict[int, Any]:
    """Parse ``c0 + c1*v + c2*v^2`` style text into {power: coefficient}."""
    text = text.strip()
    if not text:
        raise ParseError("empty element text")
    bare = re.compile(rf"^(-?){re.escape(var)}(?:\^([0-9]+))?$")
    out: dict[int, Any] = {}
    for term in _split_top(text, " + "):
        term = term.strip()
        if not term:
            raise ParseError(f"empty term in {text!r}")
        m = bare.match(term)
        if m:
            power = int(m.group(2) or 1)
            coeff = base.from_int(-1 if m.group(1) else 1)
        else:
            pieces = _split_top(term, "*")
            if len(pieces) == 1:
                power = 0
                coeff = base.parse(_strip_parens(pieces[0]))
            elif len(pieces) == 2:
                vm = re.match(
                    rf"^{re.escape(var)}(?:\^([0-9]+))?$", pieces[1].strip()
                )
                if not vm:
                    raise ParseError(f"bad term {term!r}")
                power = int(vm.group(1) or 1)
                coeff = base.parse(_strip_parens(pieces[0]))
            else:
                raise ParseError(f"bad term {term!r}")
        out[power] = (
            base.add(out[power], coeff) if power in out else coeff
        )
    return out


def _require_str(x) -> str:
    if not isinstance(x, str):
        raise ParseError(f"matrix entries must be element strings, got {x!r}")
    return x


# ---------------------------------------------------------------------------
# linear solves used by matrix-ring and group-ring inversion


def _solve_unit_pivot(base: Ring, a_rows: list[list], b_rows: list[list]):
    """Solve A·X = B by Gauss-Jordan elimination with unit pivots.

    Rows are mutated in place.  Pivot preference is 1, then -1, then any
    element ``base.try_invert_payload`` accepts.  Returns X's rows, or None
    when some column offers no unit pivot (which, over the local and field
    bases used here, happens exactly when A is not invertible).
    """
    n = len(a_rows)
    one, zero = base.one, base.zero
    minus_one = base.neg(one)
    sub, mul = base.sub, base.mul
    piv_inv: list = [None] * n
    for k in range(n):
        pivot_row, p_inv = -1, None
        for target in (one, minus_one):
            for r in range(k, n):
                if a_rows[r][k] == target:
                    pivot_row, p_inv = r, target
                    break
            if pivot_row >= 0:
                break
        if pivot_row < 0:
            for r in range(k, n):
                try:
                    p_inv = base.try_invert_payload(a_rows[r][k])
                except NotAUnit:
                    continue
                pivot_row = r
                break
        if pivot_row < 0:
            return None
        if pivot_row != k:
            a_rows[k], a_rows[pivot_row] = a_rows[pivot_row], a_rows[k]
            b_rows[k], b_rows[pivot_row] = b_rows[pivot_row], b_rows[k]
        piv_inv[k] = p_inv
        arow_k, brow_k = a_rows[k], b_rows[k]
        for j in range(n):
            if j == k or a_rows[j][k] == zero:
                continue
            f = mul(a_rows[j][k], p_inv)
            a_rows[j] = [sub(x, mul(f, y)) for x, y in zip(a_rows[j], arow_k)]
            b_rows[j] = [sub(x, mul(f, y)) for x, y in zip(b_rows[j], brow_k)]
    return [[mul(piv_inv[k], x) for x in b_rows[k]] for k in range(n)]


def _solve_linear(base: Ring, a_rows: list[list], b_rows: list[list]):
    """Solve A·X = B over ``base``, completely for the shipped base rings.

    Integer and localized bases route through the rationals and then check
    the solution lands back in the base.  Composite moduli split into prime
    power components and recombine by remainders.  Everything else runs
    unit-pivot elimination directly, which is complete over fields and
    local rings.
    """
    if isinstance(base, (IntegerRing, LocalizedIntegers)):
        Qr = RationalField()
        aq = [[mpq(x) for x in row] for row in a_rows]
        bq = [[mpq(x) for x in row] for row in b_rows]
        sol = _solve_unit_pivot(Qr, aq, bq)
        if sol is None:
            return None
        if isinstance(base, IntegerRing):
            if any(x.denominator != 1 for row in sol for x in row):
                return None
            return [[int(x.numerator) for x in row] for row in sol]
        if any(not base.admissible(x) for row in sol for x in row):
            return None
        return sol
    if isinstance(base, IntegersMod):
        fac = _factorint(base.modulus)
        if len(fac) == 1:
            return _solve_unit_pivot(
                base, [list(r) for r in a_rows], [list(r) for r in b_rows]
            )
        comps = []
        moduli = []
        for p, k in sorted(fac.items()):
            m = p**k
            comp_ring = IntegersMod(m)
            sol = _solve_unit_pivot(
                comp_ring,
                [[x % m for x in row] for row in a_rows],
                [[x % m for x in row] for row in b_rows],
            )
            if sol is None:
                return None
            comps.append(sol)
            moduli.append(m)
        rows = len(b_rows)
        cols = len(b_rows[0]) if b_rows else 0
        return [
            [
                _crt([comp[i][j] for comp in comps], moduli)
                for j in range(cols)
            ]
            for i in range(rows)
        ]
    return _solve_unit_pivot(
        base, [list(r) for r in a_rows], [list(r) for r in b_rows]
    )


def _invert_square_system(base: Ring, a_rows: list[list]):
    n = len(a_rows)
    identity = [
        [base.one if i == j else base.zero for j in range(n)] for i in range(n)
    ]
    return _solve_linear(base, a_rows, identity)


def _minor(rows: tuple, i: int, j: int) -> tuple:
    return tuple(
        tuple(v for c, v in enumerate(row) if c != j)
        for r, row in enumerate(rows)
        if r != i
    )


def _det_cofactor(base: Ring, rows: tuple):
    n = len(rows)
    if n == 0:
        return base.one
    if n == 1:
        return rows[0][0]
    acc = base.zero
    for j in range(n):
        if rows[0][j] == base.zero:
            continue
        term = base.mul(rows[0][j], _det_cofactor(base, _minor(rows, 0, j)))
        acc = base.add(acc, term) if j % 2 == 0 else base.sub(acc, term)
    return acc


def _adjugate_inverse(base: Ring, a: tuple):
    """Inverse over a commutative base via det and adjugate.

    Complete: a square matrix over a commutative ring is invertible
    exactly when its determinant is, unlike unit-pivot elimination,
    which can miss invertible matrices whose pivot columns hold only
    non-units.  Cofactor cost grows factorially, so this is a fallback
    for the small sizes where elimination gave up.
    """
    try:
        det_inv = base.try_invert_payload(_det_cofactor(base, a))
    except NotAUnit:
        return None
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            cof = _det_cofactor(base, _minor(a, j, i))
            if (i + j) % 2 == 1:
                cof = base.neg(cof)
            row.append(base.mul(det_inv, cof))
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------
# elements


class Element:
    """A payload tagged with its ring, with operator overloads.

    Construction does not re-canonicalize; use ``Ring.el`` or
    ``canonicalize`` when the payload comes from outside.
    """

    __slots__ = ("ring", "value")

    def __init__(self, ring: Ring, value):
        self.ring = ring
        self.value = value

    def _coerce(self, other):
        if isinstance(other, Element):
            if other.ring != self.ring:
                raise DescriptorMismatch(
                    f"mixed rings: {self.ring} vs {other.ring}"
                )
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Element(self.ring, self.ring.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Element(self.ring, self.ring.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Element(self.ring, self.ring.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Element(self.ring, self.ring.mul(self.value, v))

    def __rmul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return Element(self.ring, self.ring.mul(v, self.value))

    def __neg__(self):
        return Element(self.ring, self.ring.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring.fmt(self.value)

    def __repr__(self):
        return f"<{self.ring.fmt(self.value)} in {self.ring}>"

    def one_like(self) -> "Element":
        return Element(self.ring, self.ring.one)

    def zero_like(self) -> "Element":
        return Element(self.ring, self.ring.zero)

    def is_idempotent(self) -> bool:
        return self.ring.is_idempotent_payload(self.value)

    def try_invert(self) -> "UnitWitness":
        inv = self.ring.try_invert_payload(self.value)
        return UnitWitness(self, Element(self.ring, inv))


@dataclass(frozen=True)
class UnitWitness:
    """A unit with its verified two-sided inverse.

    ``factorization`` is an optional tuple of matrix generators (see
    ``matrices.py``) whose ordered product reproduces ``value``; only
    matrix-valued witnesses carry one.
    """

    value: Any
    inverse: Any
    factorization: Optional[tuple] = None

    def verify(self) -> bool:
        one = self.value.one_like()
        return self.value * self.inverse == one and self.inverse * self.value == one


# ---------------------------------------------------------------------------
# descriptor grammar


def parse_descriptor(text: str) -> Ring:
    """Parse ``Z``, ``Q``, ``Zmod:6``, ``Zloc:2,3``, ``Poly:Q:x``,
    ``Mat:Zmod:2:2`` or ``GrpC:Zloc:7:3`` (nesting allowed)."""
    tokens = text.split(":")
    ring, idx = _parse_desc_tokens(tokens, 0)
    if idx != len(tokens):
        raise ParseError(f"trailing descriptor tokens in {text!r}")
    return ring


def _desc_int(tokens: list[str], i: int, what: str) -> tuple[int, int]:
    if i >= len(tokens) or not _INT_RE.match(tokens[i]):
        raise ParseError(f"expected {what} in descriptor, got {tokens[i:]!r}")
    return int(tokens[i]), i + 1


def _parse_desc_tokens(tokens: list[str], i: int) -> tuple[Ring, int]:
    if i >= len(tokens):
        raise ParseError("empty ring descriptor")
    head = tokens[i]
    i += 1
    if head == "Z":
        return IntegerRing(), i
    if head == "Q":
        return RationalField(), i
    if head == "Zmod":
        n, i = _desc_int(tokens, i, "a modulus")
        return IntegersMod(n), i
    if head == "Zloc":
        if i >= len(tokens):
            raise ParseError("Zloc needs a prime list")
        parts = tokens[i].split(",")
        if not all(_INT_RE.match(p) for p in parts):
            raise ParseError(f"bad prime list {tokens[i]!r}")
        return LocalizedIntegers(tuple(int(p) for p in parts)), i + 1
    if head == "Poly":
        base, i = _parse_desc_tokens(tokens, i)
        if i >= len(tokens) or not _VAR_RE.match(tokens[i]):
            raise ParseError("Poly needs a variable name")
        return PolynomialRing(base, tokens[i]), i + 1
    if head == "Mat":
        base, i = _parse_desc_tokens(tokens, i)
        n, i = _desc_int(tokens, i, "a size")
        return MatrixRing(base, n), i
    if head == "GrpC":
        base, i = _parse_desc_tokens(tokens, i)
        n, i = _desc_int(tokens, i, "an order")
        return GroupRing(base, n), i
    raise ParseError(f"unknown ring kind {head!r}")


def format_descriptor(ring: Ring) -> str:
    if isinstance(ring, IntegerRing):
        return "Z"
    if isinstance(ring, RationalField):
        return "Q"
    if isinstance(ring, IntegersMod):
        return f"Zmod:{ring.modulus}"
    if isinstance(ring, LocalizedIntegers):
        return "Zloc:" + ",".join(str(p) for p in ring.primes)
    if isinstance(ring, PolynomialRing):
        return f"Poly:{format_descriptor(ring.base)}:{ring.var}"
    if isinstance(ring, MatrixRing):
        return f"Mat:{format_descriptor(ring.base)}:{ring.size}"
    if isinstance(ring, GroupRing):
        return f"GrpC:{format_descriptor(ring.base)}:{ring.order}"
    raise UnsupportedRing(f"unknown ring object {ring!r}")


# ---------------------------------------------------------------------------
# top-level operations on elements


def canonicalize(text: str, ring: Ring) -> Element:
    """Parse element text in the ring's grammar into a canonical Element."""
    if not isinstance(text, str):
        raise ParseError(f"element text must be a string, got {text!r}")
    return Element(ring, ring.parse(text))


def try_invert(a: Element) -> UnitWitness:
    """Two-sided inverse of ``a`` as a verified witness, or NotAUnit."""
    return a.try_invert()


def is_idempotent(a: Element) -> bool:
    return a.is_idempotent()


def jacobson_member(a: Element) -> bool:
    """Membership of ``a`` in the Jacobson radical, where that is decidable.

    Supported: localized integers (numerator divisible by every localized
    prime), prime-power moduli (residue divisible by the prime), and matrix
    rings over either.  Everything else raises UnsupportedRing.
    """
    return a.ring.jacobson_member_payload(a.value)


def random_element(ring: Ring, rng) -> Element:
    return Element(ring, ring.random_payload(rng))


Z = IntegerRing()
Q = RationalField()
