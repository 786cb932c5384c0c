"""Dense matrices over an arbitrary entry ring, with invertibility handled
entirely by elimination.

``Matrix`` is an immutable rectangular array of entry-ring payloads.  It
exists alongside ``MatrixRing`` elements because the decomposition
algorithms need block surgery and rectangular off-diagonal blocks; a square
Matrix and the corresponding MatrixRing payload share the same tuple shape,
so converting between the two is free.

Inversion is unit-pivot Gauss-Jordan elimination: at each column the pivot
is an entry the base ring can invert (preference +1, then -1, then any
other unit), positioned by a row swap, and every row operation is recorded
as a Generator.  No determinants anywhere; the entry ring may be
noncommutative (coefficients multiply from the left throughout), and unit
pivots keep elimination sound in that setting.

A Generator denotes one of three invertible matrices: an elementary
transvection (identity plus r in one off-diagonal spot), a row swap, or
global negation.  A factorization is an ordered tuple of generators whose
left-to-right product equals the unit.  Diagonal matrices with entries +-1
factor into transvections and swaps via plane rotations, so any elimination
whose pivots all land in {+1, -1} yields a complete factorization; a pivot
outside that set has no generator expression and the factorization is
omitted (None) in that case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

from .errors import (
    BadInput,
    DescriptorMismatch,
    InternalPatternViolation,
    NoUnitPivot,
    NotAUnit,
    ShapeMismatch,
)
from .rings import Element, MatrixRing, Ring, UnitWitness


class Matrix:
    """Immutable rectangular matrix of entry-ring payloads."""

    __slots__ = ("base", "data")

    def __init__(self, base: Ring, data):
        rows = tuple(tuple(r) for r in data)
        if not rows or not rows[0]:
            raise ShapeMismatch("matrices need at least one row and column")
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ShapeMismatch("ragged matrix rows")
        self.base = base
        self.data = rows

    @classmethod
    def of(cls, base: Ring, raw_rows) -> "Matrix":
        """Build from raw entries, canonicalizing each through the base ring."""
        return cls(base, [[base.canonical(x) for x in row] for row in raw_rows])

    @classmethod
    def identity(cls, base: Ring, n: int) -> "Matrix":
        z, o = base.zero, base.one
        return cls(base, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, base: Ring, r: int, c: int) -> "Matrix":
        z = base.zero
        return cls(base, [[z] * c for _ in range(r)])

    @classmethod
    def from_element(cls, el: Element) -> "Matrix":
        if not isinstance(el.ring, MatrixRing):
            raise DescriptorMismatch(f"not a matrix-ring element: {el.ring}")
        return cls(el.ring.base, el.value)

    def to_element(self) -> Element:
        if self.rows != self.cols:
            raise ShapeMismatch("only square matrices are matrix-ring elements")
        return Element(MatrixRing(self.base, self.rows), self.data)

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    def __getitem__(self, ij) -> Any:
        i, j = ij
        return self.data[i][j]

    def entry_el(self, i: int, j: int) -> Element:
        return Element(self.base, self.data[i][j])

    def _check_same(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise DescriptorMismatch(f"expected a Matrix, got {other!r}")
        if other.base != self.base:
            raise DescriptorMismatch(f"mixed entry rings: {self.base} vs {other.base}")

    def __add__(self, other):
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("addition needs equal shapes")
        add = self.base.add
        return Matrix(
            self.base,
            [[add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def __sub__(self, other):
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("subtraction needs equal shapes")
        sub = self.base.sub
        return Matrix(
            self.base,
            [[sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
        )

    def __neg__(self):
        neg = self.base.neg
        return Matrix(self.base, [[neg(x) for x in row] for row in self.data])

    def __mul__(self, other):
        self._check_same(other)
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        base = self.base
        add, mul, zero = base.add, base.mul, base.zero
        cols = tuple(zip(*other.data))
        out = []
        for row in self.data:
            orow = []
            for col in cols:
                # zero operands are common (block assembly, transvections);
                # skipping them never changes the exact result
                acc = None
                for x, y in zip(row, col):
                    if x == zero or y == zero:
                        continue
                    p = mul(x, y)
                    acc = p if acc is None else add(acc, p)
                orow.append(zero if acc is None else acc)
            out.append(orow)
        return Matrix(base, out)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.base == other.base and self.data == other.data

    def __hash__(self):
        return hash((self.base, self.data))

    def one_like(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeMismatch("identity of a rectangular matrix")
        return Matrix.identity(self.base, self.rows)

    def is_zero(self) -> bool:
        z = self.base.zero
        return all(x == z for row in self.data for x in row)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.base, [row[c0:c1] for row in self.data[r0:r1]])

    def fmt(self) -> str:
        return json.dumps(
            [[self.base.fmt(x) for x in row] for row in self.data],
            separators=(",", ":"),
        )

    def __str__(self):
        return self.fmt()

    def __repr__(self):
        return f"<{self.rows}x{self.cols} matrix over {self.base}: {self.fmt()}>"


def block_compose(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a grid of matrices into one, checking block conformance."""
    if not blocks or not blocks[0]:
        raise ShapeMismatch("empty block grid")
    base = blocks[0][0].base
    widths = [b.cols for b in blocks[0]]
    out_rows: list[list] = []
    for brow in blocks:
        if len(brow) != len(widths):
            raise ShapeMismatch("ragged block grid")
        h = brow[0].rows
        for b, w in zip(brow, widths):
            if b.base != base:
                raise DescriptorMismatch("blocks over mixed entry rings")
            if b.rows != h or b.cols != w:
                raise ShapeMismatch("block shapes do not align")
        for i in range(h):
            row: list = []
            for b in brow:
                row.extend(b.data[i])
            out_rows.append(row)
    return Matrix(base, out_rows)


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class ElementaryTransvection:
    """Identity plus ``r`` at position (i, j), i != j; indices are 0-based.

    Left multiplication adds r times row j to row i; right multiplication
    adds column i times r to column j.  ``side`` records which kind of
    operation produced the generator; its matrix value is the same either
    way.
    """

    i: int
    j: int
    r: Element
    side: str = "row"

    def __post_init__(self):
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise BadInput(f"bad transvection indices ({self.i}, {self.j})")
        if self.side not in ("row", "column"):
            raise BadInput(f"bad transvection side {self.side!r}")


@dataclass(frozen=True)
class RowSwap:
    """Permutation matrix exchanging indices i and j; 0-based, i != j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise BadInput(f"bad swap indices ({self.i}, {self.j})")


@dataclass(frozen=True)
class NegateAll:
    """Minus the identity."""


Generator = Union[ElementaryTransvection, RowSwap, NegateAll]


def _gen_r_payload(g: ElementaryTransvection):
    return g.r.value if isinstance(g.r, Element) else g.r


def generator_matrix(base: Ring, n: int, g: Generator) -> Matrix:
    """The matrix a single generator denotes, at ambient size n."""
    if isinstance(g, ElementaryTransvection):
        if g.i >= n or g.j >= n:
            raise BadInput(f"transvection ({g.i},{g.j}) out of range for size {n}")
        rows = [list(r) for r in Matrix.identity(base, n).data]
        rows[g.i][g.j] = _gen_r_payload(g)
        return Matrix(base, rows)
    if isinstance(g, RowSwap):
        if g.i >= n or g.j >= n:
            raise BadInput(f"swap ({g.i},{g.j}) out of range for size {n}")
        rows = [list(r) for r in Matrix.identity(base, n).data]
        rows[g.i], rows[g.j] = rows[g.j], rows[g.i]
        return Matrix(base, rows)
    if isinstance(g, NegateAll):
        return -Matrix.identity(base, n)
    raise BadInput(f"unknown generator {g!r}")


def invert_generator(g: Generator) -> Generator:
    if isinstance(g, ElementaryTransvection):
        return ElementaryTransvection(g.i, g.j, -g.r, g.side)
    return g  # swaps and global negation are involutions


def generators_product(base: Ring, n: int, gens: Sequence[Generator]) -> Matrix:
    """Ordered product gens[0]*gens[1]*...*gens[-1] as a Matrix.

    Each successive factor acts on the accumulator as a column operation,
    so a transvection costs O(n) instead of a full multiply.
    """
    add, mul, neg = base.add, base.mul, base.neg
    acc = [list(r) for r in Matrix.identity(base, n).data]
    for g in gens:
        if isinstance(g, ElementaryTransvection):
            if g.i >= n or g.j >= n:
                raise BadInput(f"transvection ({g.i},{g.j}) out of range for size {n}")
            r = _gen_r_payload(g)
            for row in acc:
                row[g.j] = add(row[g.j], mul(row[g.i], r))
        elif isinstance(g, RowSwap):
            if g.i >= n or g.j >= n:
                raise BadInput(f"swap ({g.i},{g.j}) out of range for size {n}")
            for row in acc:
                row[g.i], row[g.j] = row[g.j], row[g.i]
        elif isinstance(g, NegateAll):
            for row in acc:
                row[:] = [neg(x) for x in row]
        else:
            raise BadInput(f"unknown generator {g!r}")
    return Matrix(base, acc)


def negation_generators(base: Ring, positions: Sequence[int], n: int) -> list[Generator]:
    """Generators for the diagonal matrix with -1 at ``positions``, +1 elsewhere.

    Each pair of -1 entries is a squared plane rotation (six transvections);
    a leftover single -1 takes a swap against a helper index followed by one
    rotation.  Size 1 has no helper available, so the lone -1 there is
    global negation.
    """
    pos = sorted(positions)
    if len(set(pos)) != len(pos) or (pos and (pos[0] < 0 or pos[-1] >= n)):
        raise BadInput(f"bad negation positions {positions!r} for size {n}")
    if not pos:
        return []
    if n == 1:
        return [NegateAll()]
    one = Element(base, base.one)

    def rotation(i: int, j: int) -> list[Generator]:
        # T(i,j,1) * T(j,i,-1) * T(i,j,1) is the rotation [[0,1],[-1,0]]
        # in the (i,j) plane; its square is -1 at both i and j.
        return [
            ElementaryTransvection(i, j, one),
            ElementaryTransvection(j, i, -one),
            ElementaryTransvection(i, j, one),
        ]

    out: list[Generator] = []
    k = 0
    while k + 1 < len(pos):
        i, j = pos[k], pos[k + 1]
        out.extend(rotation(i, j))
        out.extend(rotation(i, j))
        k += 2
    if k < len(pos):
        i = pos[k]
        h = 0 if i != 0 else 1
        # Swap(i,h) followed by a rotation is -1 at i alone.
        out.append(RowSwap(i, h))
        out.extend(rotation(i, h))
    return out


def embed_generator(
    base: Ring, g: Generator, offset: int, block_size: int, ambient: int
) -> list[Generator]:
    """Reindex a generator of a block into the ambient size.

    Transvections and swaps shift their indices.  Global negation of the
    block is not a single ambient generator; it expands into the diagonal
    factorization with -1 across the block's index range.
    """
    if isinstance(g, ElementaryTransvection):
        return [ElementaryTransvection(g.i + offset, g.j + offset, g.r, g.side)]
    if isinstance(g, RowSwap):
        return [RowSwap(g.i + offset, g.j + offset)]
    if isinstance(g, NegateAll):
        return negation_generators(
            base, range(offset, offset + block_size), ambient
        )
    raise BadInput(f"unknown generator {g!r}")


# ---------------------------------------------------------------------------
# inversion


def unit_pivot_invert(m: Matrix) -> UnitWitness:
    """Invert by Gauss-Jordan elimination on unit pivots, tracking generators.

    Returns a witness whose value and inverse are Matrix objects.  The
    witness factorization multiplies back to m whenever every pivot landed
    in {+1, -1}; otherwise it is None.  Raises NoUnitPivot when some column
    has no invertible entry at or below the diagonal, which over the base
    rings shipped here means m is not invertible.
    """
    if m.rows != m.cols:
        raise ShapeMismatch("only square matrices can be inverted")
    base, n = m.base, m.rows
    zero, one = base.zero, base.one
    minus_one = base.neg(one)
    add, sub, mul = base.add, base.sub, base.mul
    work = [list(r) for r in m.data]
    inv = [list(r) for r in Matrix.identity(base, n).data]
    ops: list[Generator] = []
    piv: list = [None] * n
    piv_inv: list = [None] * n
    for k in range(n):
        prow = -1
        pinv = None
        for r in range(k, n):
            if work[r][k] == one:
                prow, pinv = r, one
                break
        if prow < 0:
            for r in range(k, n):
                if work[r][k] == minus_one:
                    prow, pinv = r, minus_one
                    break
        if prow < 0:
            for r in range(k, n):
                try:
                    pinv = base.try_invert_payload(work[r][k])
                except NotAUnit:
                    continue
                prow = r
                break
        if prow < 0:
            raise NoUnitPivot(f"no unit pivot available in column {k}")
        if prow != k:
            work[k], work[prow] = work[prow], work[k]
            inv[k], inv[prow] = inv[prow], inv[k]
            ops.append(RowSwap(k, prow))
        piv[k], piv_inv[k] = work[k][k], pinv
        wk, ik = work[k], inv[k]
        for j in range(n):
            if j == k:
                continue
            a = work[j][k]
            if a == zero:
                continue
            nf = base.neg(mul(a, pinv))
            work[j] = [add(x, mul(nf, y)) for x, y in zip(work[j], wk)]
            inv[j] = [add(x, mul(nf, y)) for x, y in zip(inv[j], ik)]
            ops.append(ElementaryTransvection(j, k, Element(base, nf), "row"))
    # work is now diag(piv); finish by scaling each row from the left.
    m_inv = Matrix(base, [[mul(piv_inv[k], x) for x in inv[k]] for k in range(n)])
    ident = Matrix.identity(base, n)
    if m * m_inv != ident or m_inv * m != ident:
        raise InternalPatternViolation("elimination produced a one-sided inverse")
    factorization: Optional[tuple]
    if all(p == one or p == minus_one for p in piv):
        neg_positions = [k for k in range(n) if piv[k] == minus_one]
        fac = [invert_generator(g) for g in ops]
        fac.extend(negation_generators(base, neg_positions, n))
        factorization = tuple(fac)
    else:
        factorization = None
    return UnitWitness(value=m, inverse=m_inv, factorization=factorization)


def block_triangular_inverse(
    u: Matrix,
    a_inv: Matrix,
    d_inv: Matrix,
    lower: bool = False,
    check: bool = True,
) -> Matrix:
    """Inverse of [[A,B],[0,D]] as [[A^-1, -A^-1 B D^-1],[0, D^-1]].

    With lower=True the shape is [[A,0],[C,D]] and the inverse is
    [[A^-1, 0],[-D^-1 C A^-1, D^-1]].  The split point is a_inv's size.
    check=True re-verifies the zero block and both products; recursive
    callers that constructed the blocks themselves may skip it.
    """
    n1, n2 = a_inv.rows, d_inv.rows
    if a_inv.cols != n1 or d_inv.cols != n2:
        raise ShapeMismatch("block inverses must be square")
    if u.rows != u.cols or u.rows != n1 + n2:
        raise ShapeMismatch("block sizes do not add up to the matrix size")
    base = u.base
    if not lower:
        b = u.submatrix(0, n1, n1, n1 + n2)
        if check and not u.submatrix(n1, n1 + n2, 0, n1).is_zero():
            raise BadInput("lower-left block is not zero")
        out = block_compose(
            [
                [a_inv, -(a_inv * b * d_inv)],
                [Matrix.zeros(base, n2, n1), d_inv],
            ]
        )
    else:
        c = u.submatrix(n1, n1 + n2, 0, n1)
        if check and not u.submatrix(0, n1, n1, n1 + n2).is_zero():
            raise BadInput("upper-right block is not zero")
        out = block_compose(
            [
                [a_inv, Matrix.zeros(base, n1, n2)],
                [-(d_inv * c * a_inv), d_inv],
            ]
        )
    if check:
        ident = Matrix.identity(base, n1 + n2)
        if u * out != ident or out * u != ident:
            raise BadInput("blocks are not the inverses they were claimed to be")
    return out


def element_witness(w: UnitWitness) -> UnitWitness:
    """Rewrap a Matrix-valued witness as a matrix-ring Element witness."""
    return UnitWitness(
        value=w.value.to_element(),
        inverse=w.inverse.to_element(),
        factorization=w.factorization,
    )
