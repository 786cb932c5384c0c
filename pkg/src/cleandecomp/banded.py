"""Banded operators on a countable basis: the triangular/diagonal split,
parity alternation along stride blocks, and windowed verification.

An operator here is a pure entry generator ``entry(i, j)`` (indices start
at 1) that vanishes whenever ``|i - j|`` exceeds the bandwidth, so every
row and column has finitely many nonzero entries.  Such an operator
splits as eta + rho + delta: eta strictly below the diagonal (target
index above the source index), rho strictly above, delta on it.  Cutting
the index line into blocks of size bandwidth + 1 and sorting eta by the
parity of its source block, rho by the parity of its target block, and
decomposing each diagonal entry as idempotent + unit + unit yields

    phi = (eta1 + rho2 + delta1) + (eta2 + rho1 + delta2) + deltaE

where both parenthesized operators are units: each is a diagonal of
units times (1 + N) with N locally nilpotent, so columns of the inverse
come from a terminating Neumann series.

Diagonal entries are decomposed by the scalar two-unit rule when the
base ring is local, and by the generic 2x2 construction after pairing
indices into 2x2 blocks (block2) otherwise.  Everything is verified on
finite windows in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .decompose import decompose_2x2, local_two_clean
from .errors import (
    BadInput,
    CapExceeded,
    DescriptorMismatch,
    InternalPatternViolation,
    NoScalarRule,
    ParseError,
)
from .matrices import Matrix
from .rings import Element, MatrixRing, Ring, parse_descriptor, random_element

DEFAULT_WINDOW = 48
MAX_WINDOW = 512
BUILTIN_OPERATORS = ("identity", "shift", "tridiagonal")


# ---------------------------------------------------------------------------
# the operator type


@dataclass(frozen=True, eq=False)
class BandedOperator:
    """A deterministic banded entry generator over a base ring.

    ``raw`` returns payloads and clamps everything outside the band to
    zero; ``probe`` calls the generator unclamped so the band contract
    itself can be spot-checked.
    """

    base: Ring
    bandwidth: int
    _fn: Callable[[int, int], object]

    def raw(self, i: int, j: int):
        if i < 1 or j < 1:
            raise BadInput(f"indices start at 1, got ({i}, {j})")
        if abs(i - j) > self.bandwidth:
            return self.base.zero
        return self._fn(i, j)

    def probe(self, i: int, j: int):
        if i < 1 or j < 1:
            raise BadInput(f"indices start at 1, got ({i}, {j})")
        return self._fn(i, j)

    def entry(self, i: int, j: int) -> Element:
        return Element(self.base, self.raw(i, j))

    def window(self, w: int):
        if w < 1:
            raise BadInput(f"window must be >= 1, got {w}")
        return tuple(
            tuple(self.raw(i, j) for j in range(1, w + 1)) for i in range(1, w + 1)
        )


def banded_operator(
    base: Ring, bandwidth: int, fn: Callable[[int, int], object], spot_check: bool = True
) -> BandedOperator:
    """Wrap a pure entry function, memoized; optionally spot-check that it
    honors the band contract at a few out-of-band positions."""
    if not isinstance(bandwidth, int) or bandwidth < 0:
        raise BadInput(f"bandwidth must be a nonnegative integer, got {bandwidth!r}")
    cached = lru_cache(maxsize=None)(fn)
    if spot_check:
        b = bandwidth
        for i, j in ((1, b + 2), (b + 4, 1), (7, 9 + b), (10 + b, 3), (2, 5 + b)):
            if fn(i, j) != base.zero:
                raise BadInput(
                    f"generator violates the band contract at ({i}, {j}): "
                    f"bandwidth {b} but entry is {base.fmt(fn(i, j))}"
                )
    return BandedOperator(base, bandwidth, cached)


def zero_operator(base: Ring) -> BandedOperator:
    return BandedOperator(base, 0, lambda i, j: base.zero)


def diagonal_operator(base: Ring, fn: Callable[[int], object]) -> BandedOperator:
    cached = lru_cache(maxsize=None)(fn)
    return BandedOperator(base, 0, lambda i, j: cached(i) if i == j else base.zero)


def identity_operator(base: Ring) -> BandedOperator:
    return BandedOperator(base, 0, lambda i, j: base.one if i == j else base.zero)


def shift_operator(base: Ring) -> BandedOperator:
    # entry(i, j) = 1 exactly when i = j + 1
    return BandedOperator(base, 1, lambda i, j: base.one if i == j + 1 else base.zero)


def tridiagonal_operator(base: Ring) -> BandedOperator:
    return BandedOperator(
        base, 1, lambda i, j: base.one if abs(i - j) <= 1 else base.zero
    )


def operator_add(a: BandedOperator, b: BandedOperator) -> BandedOperator:
    if a.base != b.base:
        raise DescriptorMismatch(f"cannot add operators over {a.base} and {b.base}")
    add = a.base.add
    return banded_operator(
        a.base,
        max(a.bandwidth, b.bandwidth),
        lambda i, j: add(a.raw(i, j), b.raw(i, j)),
        spot_check=False,
    )


def operator_neg(a: BandedOperator) -> BandedOperator:
    neg = a.base.neg
    return banded_operator(
        a.base, a.bandwidth, lambda i, j: neg(a.raw(i, j)), spot_check=False
    )


def random_banded_operator(
    base: Ring, bandwidth: int, rng, period: int = 24
) -> BandedOperator:
    """A deterministic banded operator with one random periodic pattern
    per diagonal, drawn up front so the entry generator stays pure."""
    if bandwidth < 0 or period < 1:
        raise BadInput("need bandwidth >= 0 and period >= 1")
    patterns = {
        d: tuple(random_element(base, rng).value for _ in range(period))
        for d in range(-bandwidth, bandwidth + 1)
    }

    def fn(i: int, j: int):
        d = i - j
        if d not in patterns:
            return base.zero
        return patterns[d][(j - 1) % period]

    return banded_operator(base, bandwidth, fn, spot_check=False)


# ---------------------------------------------------------------------------
# strides and the three-way split


@dataclass(frozen=True)
class StrideSequence:
    """Block boundaries 1, b+2, 2b+3, ...: consecutive gaps of b + 1
    starting at index 1, so a band-b operator maps each block no further
    than the next."""

    bandwidth: int

    def __post_init__(self):
        if self.bandwidth < 0:
            raise BadInput("stride sequence needs bandwidth >= 0")

    def r(self, s: int) -> int:
        if s < 0:
            raise BadInput("stride positions are indexed from 0")
        return 1 + s * (self.bandwidth + 1)

    def block_of(self, i: int) -> int:
        if i < 1:
            raise BadInput(f"indices start at 1, got {i}")
        return (i - 1) // (self.bandwidth + 1)

    def in_even_block(self, i: int) -> bool:
        return self.block_of(i) % 2 == 0


def split_abd(phi: BandedOperator):
    """(eta, rho, delta): target-above-source, target-below-source, and
    diagonal parts.  Source is the column index, target the row index."""
    base = phi.base
    eta = banded_operator(
        base,
        phi.bandwidth,
        lambda i, j: phi.raw(i, j) if i > j else base.zero,
        spot_check=False,
    )
    rho = banded_operator(
        base,
        phi.bandwidth,
        lambda i, j: phi.raw(i, j) if i < j else base.zero,
        spot_check=False,
    )
    delta = diagonal_operator(base, lambda i: phi.raw(i, i))
    return eta, rho, delta


def alternate_split(part: BandedOperator, strides: StrideSequence, axis: str):
    """Split by stride-block parity: even blocks first.  ``axis`` says
    which index the parity is read from: "source" (column, for eta) or
    "target" (row, for rho)."""
    if axis not in ("source", "target"):
        raise BadInput(f'axis must be "source" or "target", got {axis!r}')
    base = part.base
    pick = (lambda i, j: j) if axis == "source" else (lambda i, j: i)
    even = banded_operator(
        base,
        part.bandwidth,
        lambda i, j: part.raw(i, j) if strides.in_even_block(pick(i, j)) else base.zero,
        spot_check=False,
    )
    odd = banded_operator(
        base,
        part.bandwidth,
        lambda i, j: base.zero if strides.in_even_block(pick(i, j)) else part.raw(i, j),
        spot_check=False,
    )
    return even, odd


# ---------------------------------------------------------------------------
# diagonal decomposition


@dataclass(frozen=True, eq=False)
class DiagonalUnit:
    """A diagonal of units together with the diagonal of their inverses."""

    operator: BandedOperator
    inverse: BandedOperator


def _diagonal_rule(base: Ring):
    """Per-entry two-unit clean rule: returns a cached map from a diagonal
    payload-producing callable to (e, u1, u1inv, u2, u2inv) payloads."""
    if isinstance(base, MatrixRing) and base.size == 2:
        entry_ring = base.base

        def rule(payload):
            dec = decompose_2x2(Matrix(entry_ring, payload))
            w1, w2 = dec.units
            return (
                dec.idempotent.data,
                w1.value.data,
                w1.inverse.data,
                w2.value.data,
                w2.inverse.data,
            )

        return rule
    if base.is_local():

        def rule(payload):
            dec = local_two_clean(Element(base, payload))
            w1, w2 = dec.units
            return (
                dec.idempotent.value,
                w1.value.value,
                w1.inverse.value,
                w2.value.value,
                w2.inverse.value,
            )

        return rule
    raise NoScalarRule(
        f"no entrywise two-unit rule over {base}; pair indices with block2 first"
    )


def delta_decompose(delta: BandedOperator):
    """delta = delta1 + delta2 + deltaE entrywise: two diagonals of units
    with stored inverses and a diagonal of idempotents."""
    base = delta.base
    rule = _diagonal_rule(base)

    @lru_cache(maxsize=None)
    def parts(i: int):
        return rule(delta.raw(i, i))

    delta_e = diagonal_operator(base, lambda i: parts(i)[0])
    delta1 = DiagonalUnit(
        diagonal_operator(base, lambda i: parts(i)[1]),
        diagonal_operator(base, lambda i: parts(i)[2]),
    )
    delta2 = DiagonalUnit(
        diagonal_operator(base, lambda i: parts(i)[3]),
        diagonal_operator(base, lambda i: parts(i)[4]),
    )
    return delta1, delta2, delta_e


def block2(phi: BandedOperator) -> BandedOperator:
    """Pair indices (2I-1, 2I) into one block index I over the 2x2 matrix
    ring.  A band-b operator becomes band-floor((b+1)/2): blocks with
    |I-J| beyond that only cover positions with |i-j| > b."""
    base = phi.base
    blocked_base = MatrixRing(base, 2)

    def fn(bi: int, bj: int):
        r0, c0 = 2 * bi - 1, 2 * bj - 1
        return (
            (phi.raw(r0, c0), phi.raw(r0, c0 + 1)),
            (phi.raw(r0 + 1, c0), phi.raw(r0 + 1, c0 + 1)),
        )

    return banded_operator(
        blocked_base, (phi.bandwidth + 1) // 2, fn, spot_check=False
    )


# ---------------------------------------------------------------------------
# the decomposition


@dataclass(frozen=True, eq=False)
class DecomposedUnit:
    """One of the two unit summands, kept in factored form: a diagonal of
    units (with inverses) plus a strictly triangular perturbation whose
    diagonal-scaled version is locally nilpotent."""

    operator: BandedOperator
    diagonal: BandedOperator
    diagonal_inverse: BandedOperator
    perturbation: BandedOperator

    def raw(self, i: int, j: int):
        return self.operator.raw(i, j)

    def entry(self, i: int, j: int) -> Element:
        return self.operator.entry(i, j)


def _decomposed_unit(diag: DiagonalUnit, pert: BandedOperator) -> DecomposedUnit:
    return DecomposedUnit(
        operator=operator_add(diag.operator, pert),
        diagonal=diag.operator,
        diagonal_inverse=diag.inverse,
        perturbation=pert,
    )


@dataclass(frozen=True, eq=False)
class OperatorSplit:
    eta: BandedOperator
    rho: BandedOperator
    delta: BandedOperator
    eta1: BandedOperator
    eta2: BandedOperator
    rho1: BandedOperator
    rho2: BandedOperator
    delta1: BandedOperator
    delta2: BandedOperator
    delta_e: BandedOperator


@dataclass(frozen=True, eq=False)
class BandedCleanDecomposition:
    original: BandedOperator
    effective: BandedOperator  # equals original unless blocked
    blocked: bool
    u1: DecomposedUnit
    u2: DecomposedUnit
    idempotent: BandedOperator
    split: OperatorSplit


def theorem8_decompose(
    phi: BandedOperator, use_block2: Optional[bool] = None
) -> BandedCleanDecomposition:
    """phi = U1 + U2 + E with U1, U2 units held in factored form and E a
    diagonal idempotent.

    The diagonal rule needs a local base or a 2x2 matrix base; any other
    base is routed through block2 automatically.  Pass ``use_block2`` to
    force or forbid the pairing explicitly.
    """
    base = phi.base
    if use_block2 is None:
        already_blocked = isinstance(base, MatrixRing) and base.size == 2
        use_block2 = not (base.is_local() or already_blocked)
    effective = block2(phi) if use_block2 else phi
    blocked = bool(use_block2)

    eta, rho, delta = split_abd(effective)
    strides = StrideSequence(effective.bandwidth)
    eta1, eta2 = alternate_split(eta, strides, "source")
    rho1, rho2 = alternate_split(rho, strides, "target")
    d1, d2, delta_e = delta_decompose(delta)

    u1 = _decomposed_unit(d1, operator_add(eta1, rho2))
    u2 = _decomposed_unit(d2, operator_add(eta2, rho1))
    split = OperatorSplit(
        eta, rho, delta, eta1, eta2, rho1, rho2, d1.operator, d2.operator, delta_e
    )
    return BandedCleanDecomposition(
        original=phi,
        effective=effective,
        blocked=blocked,
        u1=u1,
        u2=u2,
        idempotent=delta_e,
        split=split,
    )


# ---------------------------------------------------------------------------
# Neumann inversion


def _apply(op: BandedOperator, vec: dict) -> dict:
    """Left-multiply a finitely supported column (index -> payload)."""
    base = op.base
    zero, add, mul = base.zero, base.add, base.mul
    out: dict = {}
    for j, c in vec.items():
        if c == zero:
            continue
        for i in range(max(1, j - op.bandwidth), j + op.bandwidth + 1):
            p = op.raw(i, j)
            if p == zero:
                continue
            out[i] = add(out.get(i, zero), mul(p, c))
    return {i: c for i, c in out.items() if c != zero}


@dataclass(frozen=True)
class NeumannColumn:
    index: int
    terms: int  # number of series terms accumulated (beyond the seed)
    column: dict  # row index -> Element


def neumann_inverse_column(
    u: DecomposedUnit, j: int, cap: Optional[int] = None
) -> NeumannColumn:
    """Column j of U^-1 where U = D(1 + N), D the unit diagonal and
    N = D^-1 * perturbation: the series sum_t (-N)^t applied to D^-1 e_j,
    finite because N is locally nilpotent.  Verified by U * column = e_j
    before returning; a series that refuses to die within the cap means
    the construction is broken."""
    if j < 1:
        raise BadInput(f"column indices start at 1, got {j}")
    base = u.operator.base
    b = u.operator.bandwidth
    if cap is None:
        cap = 10 * (j + b + 2)
    neg = base.neg
    term = {j: u.diagonal_inverse.raw(j, j)}
    total = dict(term)
    iterations = 0
    while True:
        term = _apply(u.perturbation, term)
        term = _apply(u.diagonal_inverse, term)
        term = {i: neg(c) for i, c in term.items()}
        if not term:
            break
        iterations += 1
        if iterations > cap:
            raise CapExceeded(
                f"Neumann series for column {j} still alive after {cap} terms"
            )
        add = base.add
        for i, c in term.items():
            s = add(total.get(i, base.zero), c)
            if s == base.zero:
                total.pop(i, None)
            else:
                total[i] = s
    check = _apply(u.operator, total)
    if check != {j: base.one}:
        raise InternalPatternViolation(
            f"inverse column {j} failed its product check"
        )
    return NeumannColumn(
        index=j,
        terms=iterations,
        column={i: Element(base, c) for i, c in sorted(total.items())},
    )


# ---------------------------------------------------------------------------
# windowed verification


@dataclass(frozen=True)
class WindowReport:
    window: int
    effective_window: int
    blocked: bool
    column_limit: int
    reconstruction_ok: bool
    idempotent_ok: bool
    split_ok: bool
    band_ok: bool
    u1_columns_ok: bool
    u2_columns_ok: bool
    max_terms_u1: int
    max_terms_u2: int
    failures: tuple

    @property
    def all_ok(self) -> bool:
        return not self.failures

    def lines(self):
        def mark(ok):
            return "pass" if ok else "FAIL"

        blocked_note = " (index pairs blocked to 2x2)" if self.blocked else ""
        out = [
            f"window: {self.window}, effective {self.effective_window}{blocked_note}",
            f"reconstruction: {mark(self.reconstruction_ok)}",
            f"idempotent diagonal: {mark(self.idempotent_ok)}",
            f"split recomposition: {mark(self.split_ok)}",
            f"band contract: {mark(self.band_ok)}",
            f"unit 1 inverse columns (j <= {self.column_limit}): "
            f"{mark(self.u1_columns_ok)}, longest series {self.max_terms_u1}",
            f"unit 2 inverse columns (j <= {self.column_limit}): "
            f"{mark(self.u2_columns_ok)}, longest series {self.max_terms_u2}",
        ]
        for f in self.failures:
            out.append(f"failure: {f}")
        return out


def window_verify(
    phi: BandedOperator,
    dec: BandedCleanDecomposition,
    w: int,
    column_limit: Optional[int] = None,
) -> WindowReport:
    """Exact checks on the leading w x w window: reconstruction, diagonal
    idempotency, split recomposition, the band contract on sampled
    out-of-band positions, and inverse columns of both units."""
    if w < 1:
        raise BadInput(f"window must be >= 1, got {w}")
    eff = dec.effective
    base = eff.base
    zero, add, mul = base.zero, base.add, base.mul
    w_eff = (w + 1) // 2 if dec.blocked else w
    if column_limit is None:
        column_limit = w_eff
    failures = []

    recon_ok = True
    for i in range(1, w_eff + 1):
        for j in range(1, w_eff + 1):
            lhs = eff.raw(i, j)
            rhs = add(add(dec.u1.raw(i, j), dec.u2.raw(i, j)), dec.idempotent.raw(i, j))
            if lhs != rhs:
                recon_ok = False
                failures.append(f"reconstruction differs at ({i}, {j})")
                break
        if not recon_ok:
            break

    idem_ok = True
    for i in range(1, w_eff + 1):
        e = dec.idempotent.raw(i, i)
        if mul(e, e) != e:
            idem_ok = False
            failures.append(f"idempotent diagonal fails at index {i}")
            break

    split_ok = True
    s = dec.split
    for i in range(1, w_eff + 1):
        lo = max(1, i - eff.bandwidth)
        for j in range(lo, i + eff.bandwidth + 1):
            if add(s.eta1.raw(i, j), s.eta2.raw(i, j)) != s.eta.raw(i, j):
                split_ok = False
                failures.append(f"eta parts do not recompose at ({i}, {j})")
                break
            if add(s.rho1.raw(i, j), s.rho2.raw(i, j)) != s.rho.raw(i, j):
                split_ok = False
                failures.append(f"rho parts do not recompose at ({i}, {j})")
                break
            three = add(add(s.delta1.raw(i, j), s.delta2.raw(i, j)), s.delta_e.raw(i, j))
            if three != s.delta.raw(i, j):
                split_ok = False
                failures.append(f"delta parts do not recompose at ({i}, {j})")
                break
        if not split_ok:
            break

    band_ok = True
    for op, name in ((phi, "input"), (eff, "effective")):
        b = op.bandwidth
        for i, j in ((1, b + 2), (b + 3, 1), (w, w + b + 1), (w + b + 1, max(1, w - 1))):
            if op.probe(i, j) != op.base.zero:
                band_ok = False
                failures.append(f"{name} operator breaks the band contract at ({i}, {j})")
                break
        if not band_ok:
            break

    max_terms = [0, 0]
    cols_ok = [True, True]
    for k, unit in enumerate((dec.u1, dec.u2)):
        for j in range(1, min(column_limit, w_eff) + 1):
            try:
                col = neumann_inverse_column(unit, j)
            except (CapExceeded, InternalPatternViolation) as exc:
                cols_ok[k] = False
                failures.append(f"unit {k + 1} inverse column {j}: {exc}")
                break
            max_terms[k] = max(max_terms[k], col.terms)

    return WindowReport(
        window=w,
        effective_window=w_eff,
        blocked=dec.blocked,
        column_limit=min(column_limit, w_eff),
        reconstruction_ok=recon_ok,
        idempotent_ok=idem_ok,
        split_ok=split_ok,
        band_ok=band_ok,
        u1_columns_ok=cols_ok[0],
        u2_columns_ok=cols_ok[1],
        max_terms_u1=max_terms[0],
        max_terms_u2=max_terms[1],
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# operator spec files


def operator_from_spec(data: dict) -> BandedOperator:
    """Build an operator from a plain dict: {"ring": <descriptor>, and
    either "builtin": identity|shift|tridiagonal, or "bandwidth": b with
    "bands": [{"offset": d, "pattern": [elements...]}]}.

    A band places pattern[(j - 1) mod len] at (j + offset, j): offsets
    are target minus source, positive below the diagonal.
    """
    if not isinstance(data, dict):
        raise ParseError("operator spec must be a JSON object")
    if "ring" not in data:
        raise ParseError('operator spec needs a "ring" descriptor')
    base = parse_descriptor(data["ring"])

    if "builtin" in data:
        name = data["builtin"]
        if name == "identity":
            return identity_operator(base)
        if name == "shift":
            return shift_operator(base)
        if name == "tridiagonal":
            return tridiagonal_operator(base)
        raise BadInput(
            f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_OPERATORS)}"
        )

    if "bandwidth" not in data or "bands" not in data:
        raise ParseError('operator spec needs "builtin" or "bandwidth" plus "bands"')
    bandwidth = data["bandwidth"]
    if not isinstance(bandwidth, int) or bandwidth < 0:
        raise BadInput(f"bandwidth must be a nonnegative integer, got {bandwidth!r}")
    bands = {}
    for band in data["bands"]:
        if not isinstance(band, dict) or "offset" not in band or "pattern" not in band:
            raise ParseError('each band needs "offset" and "pattern"')
        offset = band["offset"]
        if not isinstance(offset, int) or abs(offset) > bandwidth:
            raise BadInput(
                f"band offset {offset!r} outside the declared bandwidth {bandwidth}"
            )
        if offset in bands:
            raise BadInput(f"duplicate band offset {offset}")
        pattern = band["pattern"]
        if not isinstance(pattern, list) or not pattern:
            raise ParseError("band pattern must be a nonempty list of elements")
        bands[offset] = tuple(base.parse(str(p)) for p in pattern)

    def fn(i: int, j: int):
        pat = bands.get(i - j)
        if pat is None:
            return base.zero
        return pat[(j - 1) % len(pat)]

    return banded_operator(base, bandwidth, fn, spot_check=False)
