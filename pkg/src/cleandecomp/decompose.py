"""Constructive decomposition of a square matrix into an idempotent plus
two invertible matrices, over an arbitrary entry ring.

The 2x2 and 3x3 cases are closed forms.  For 2x2 the idempotent has both
rows equal to (a11-1, 2-a11); the row sum is 1, which forces idempotency,
and conjugating the difference by two transvections turns it into
diag(1, c), which splits as [[1,1],[1,0]] + [[0,-1],[-1,c]], both of which
have fixed inverses.  The 3x3 case is the same idea with all three rows of
the idempotent equal to (b11-1, b22-1, 3-b11-b22) and three transvections;
after conjugation the middle of the residue matrix has a forced 0/1
pattern (asserted at runtime), and the residue splits into a cyclic-shift
style unit plus a complementary one.  Every product is evaluated in a
fixed written order, so the construction is valid over noncommutative
entry rings.

Sizes n >= 4 reduce to the base cases by block recursion: split off a
leading 2x2 block (the tail therefore ends in a 3 exactly when n is odd),
decompose both diagonal blocks, and absorb the off-diagonal blocks into
block-triangular units, one riding in each.  Block-triangular inverses
come from the diagonal-block inverses, and generator factorizations embed
blockwise with unipotent corrections.

Also here: verification (re-multiplication of every claim), lengthening a
decomposition by one unit via e = (1-e) + (2e-1), the halving construction
that turns an n-unit clean decomposition into n+1 units summing to the
element when 2 is invertible, and the two-unit scalar rule for local
rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .errors import (
    BadInput,
    InternalPatternViolation,
    NoScalarRule,
    NotAUnit,
    ShapeMismatch,
    SizeTooSmall,
    TwoNotInvertible,
)
from .matrices import (
    ElementaryTransvection,
    Generator,
    Matrix,
    block_compose,
    block_triangular_inverse,
    embed_generator,
    generators_product,
    unit_pivot_invert,
)
from .rings import Element, MatrixRing, Ring, UnitWitness


@dataclass(frozen=True)
class CleanDecomposition:
    """target = idempotent + units[0].value + ... + units[-1].value, exactly."""

    target: Any
    idempotent: Any
    units: tuple[UnitWitness, ...]

    @property
    def n_units(self) -> int:
        return len(self.units)


@dataclass(frozen=True)
class UnitCheckReport:
    two_sided_ok: bool
    factorization_ok: Optional[bool]  # None when no factorization is claimed


@dataclass(frozen=True)
class DecompositionReport:
    idempotent_ok: bool
    sum_ok: bool
    unit_reports: tuple[UnitCheckReport, ...]

    @property
    def all_ok(self) -> bool:
        return (
            self.idempotent_ok
            and self.sum_ok
            and all(
                u.two_sided_ok and u.factorization_ok is not False
                for u in self.unit_reports
            )
        )


def verify_decomposition(d: CleanDecomposition) -> DecompositionReport:
    """Re-check every claim of a decomposition by direct multiplication."""
    e = d.idempotent
    idem_ok = e * e == e
    acc = e
    unit_reports = []
    for w in d.units:
        acc = acc + w.value
        two_ok = w.verify()
        fac_ok: Optional[bool] = None
        if w.factorization is not None:
            vm = _as_matrix(w.value)
            if vm is None or vm.rows != vm.cols:
                fac_ok = False
            else:
                fac_ok = (
                    generators_product(vm.base, vm.rows, w.factorization) == vm
                )
        unit_reports.append(UnitCheckReport(two_ok, fac_ok))
    sum_ok = acc == d.target
    return DecompositionReport(idem_ok, sum_ok, tuple(unit_reports))


def _as_matrix(v) -> Optional[Matrix]:
    if isinstance(v, Matrix):
        return v
    if isinstance(v, Element) and isinstance(v.ring, MatrixRing):
        return Matrix.from_element(v)
    return None


# ---------------------------------------------------------------------------
# 2x2


def decompose_2x2(a: Matrix) -> CleanDecomposition:
    """Two-unit clean decomposition of any 2x2 matrix; total on its domain."""
    if a.rows != 2 or a.cols != 2:
        raise ShapeMismatch("decompose_2x2 needs a 2x2 matrix")
    R = a.base
    one, zero = R.one, R.zero
    add, sub, mul, neg = R.add, R.sub, R.mul, R.neg
    two = R.from_int(2)
    (a11, a12), (a21, a22) = a.data

    e_row = (sub(a11, one), sub(two, a11))
    E = Matrix(R, (e_row, e_row))

    p = sub(sub(a11, a21), one)
    q = sub(two, add(a11, a12))
    # c = a11*a11 + a11*a12 - a21*a12 - a21*a11 - 2*a11 + 2*a21 - a12 + a22,
    # products taken in exactly this order.
    c = mul(a11, a11)
    c = add(c, mul(a11, a12))
    c = sub(c, mul(a21, a12))
    c = sub(c, mul(a21, a11))
    c = sub(c, mul(two, a11))
    c = add(c, mul(two, a21))
    c = sub(c, a12)
    c = add(c, a22)

    np_, nq = neg(p), neg(q)
    P = Matrix(R, ((one, zero), (p, one)))
    Pinv = Matrix(R, ((one, zero), (np_, one)))
    Qm = Matrix(R, ((one, q), (zero, one)))
    Qinv = Matrix(R, ((one, nq), (zero, one)))

    K1 = Matrix(R, ((one, one), (one, zero)))
    K1inv = Matrix(R, ((zero, one), (one, neg(one))))
    K2 = Matrix(R, ((zero, neg(one)), (neg(one), c)))
    K2inv = Matrix(R, ((neg(c), neg(one)), (neg(one), zero)))

    U1 = Pinv * K1 * Qinv
    U2 = Pinv * K2 * Qinv
    U1inv = Qm * K1inv * P
    U2inv = Qm * K2inv * P

    k1fac = unit_pivot_invert(K1).factorization
    k2fac = unit_pivot_invert(K2).factorization
    if k1fac is None or k2fac is None:
        raise InternalPatternViolation("pivot pattern of the fixed 2x2 units broke")
    g_pinv = ElementaryTransvection(1, 0, Element(R, np_), "row")
    g_qinv = ElementaryTransvection(0, 1, Element(R, nq), "column")
    fac1 = (g_pinv,) + k1fac + (g_qinv,)
    fac2 = (g_pinv,) + k2fac + (g_qinv,)

    if E + U1 + U2 != a:
        raise InternalPatternViolation("2x2 closed form failed to sum back")
    return CleanDecomposition(
        target=a,
        idempotent=E,
        units=(
            UnitWitness(U1, U1inv, fac1),
            UnitWitness(U2, U2inv, fac2),
        ),
    )


# ---------------------------------------------------------------------------
# 3x3


def decompose_3x3(b: Matrix) -> CleanDecomposition:
    """Two-unit clean decomposition of any 3x3 matrix; total on its domain."""
    if b.rows != 3 or b.cols != 3:
        raise ShapeMismatch("decompose_3x3 needs a 3x3 matrix")
    R = b.base
    one, zero = R.one, R.zero
    add, sub, neg = R.add, R.sub, R.neg
    three = R.from_int(3)
    (b11, b12, b13), (b21, b22, b23), (b31, b32, b33) = b.data

    f_row = (sub(b11, one), sub(b22, one), sub(three, add(b11, b22)))
    F = Matrix(R, (f_row, f_row, f_row))

    t_r = sub(sub(b11, b31), one)        # T = I + t_r at (2,0)
    v_r = sub(sub(b22, b12), one)        # V = I + v_r at (0,1)
    w_r = sub(sub(sub(three, b23), b11), b22)  # W = I + w_r at (1,2)

    def transvection_matrix(i, j, r):
        rows = [list(row) for row in Matrix.identity(R, 3).data]
        rows[i][j] = r
        return Matrix(R, rows)

    T = transvection_matrix(2, 0, t_r)
    Tinv = transvection_matrix(2, 0, neg(t_r))
    V = transvection_matrix(0, 1, v_r)
    Vinv = transvection_matrix(0, 1, neg(v_r))
    W = transvection_matrix(1, 2, w_r)
    Winv = transvection_matrix(1, 2, neg(w_r))

    M = V * (T * ((b - F) * W))
    if (
        M[0, 1] != zero
        or M[1, 1] != one
        or M[1, 2] != zero
        or M[2, 0] != zero
    ):
        raise InternalPatternViolation(
            "conjugated 3x3 residue broke its forced 0/1 pattern"
        )

    U1p = Matrix(
        R,
        (
            (zero, one, M[0, 2]),
            (zero, zero, one),
            (one, M[2, 1], M[2, 2]),
        ),
    )
    U2p = Matrix(
        R,
        (
            (M[0, 0], neg(one), zero),
            (M[1, 0], one, neg(one)),
            (neg(one), zero, zero),
        ),
    )
    w1p = unit_pivot_invert(U1p)
    w2p = unit_pivot_invert(U2p)
    if w1p.factorization is None or w2p.factorization is None:
        raise InternalPatternViolation("pivot pattern of the 3x3 units broke")

    U1 = Tinv * (Vinv * (U1p * Winv))
    U2 = Tinv * (Vinv * (U2p * Winv))
    U1inv = W * (w1p.inverse * (V * T))
    U2inv = W * (w2p.inverse * (V * T))

    g_tinv = ElementaryTransvection(2, 0, Element(R, neg(t_r)), "row")
    g_vinv = ElementaryTransvection(0, 1, Element(R, neg(v_r)), "row")
    g_winv = ElementaryTransvection(1, 2, Element(R, neg(w_r)), "column")
    fac1 = (g_tinv, g_vinv) + w1p.factorization + (g_winv,)
    fac2 = (g_tinv, g_vinv) + w2p.factorization + (g_winv,)

    if F + U1 + U2 != b:
        raise InternalPatternViolation("3x3 construction failed to sum back")
    return CleanDecomposition(
        target=b,
        idempotent=F,
        units=(
            UnitWitness(U1, U1inv, fac1),
            UnitWitness(U2, U2inv, fac2),
        ),
    )


# ---------------------------------------------------------------------------
# n x n block recursion


def decompose_nxn(a: Matrix) -> CleanDecomposition:
    """Two-unit clean decomposition for any square size n >= 2.

    The splitting is a leading 2x2 block plus the recursive remainder, so
    the block sizes are greedy 2's with a single 3 at the end when n is
    odd.  Each off-diagonal block rides inside one block-triangular unit.
    """
    if a.rows != a.cols:
        raise ShapeMismatch("decompose_nxn needs a square matrix")
    n = a.rows
    if n < 2:
        raise SizeTooSmall(
            "1x1 matrices over an arbitrary ring need not decompose; size 2 required"
        )
    if n == 2:
        return decompose_2x2(a)
    if n == 3:
        return decompose_3x3(a)
    R = a.base
    n1 = 2
    n2 = n - n1

    a11 = a.submatrix(0, n1, 0, n1)
    a12 = a.submatrix(0, n1, n1, n)
    a21 = a.submatrix(n1, n, 0, n1)
    a22 = a.submatrix(n1, n, n1, n)

    d1 = decompose_nxn(a11)
    d2 = decompose_nxn(a22)
    u1b, u2b = d1.units
    v1b, v2b = d2.units

    z12 = Matrix.zeros(R, n1, n2)
    z21 = Matrix.zeros(R, n2, n1)
    E = block_compose([[d1.idempotent, z12], [z21, d2.idempotent]])
    U1 = block_compose([[u1b.value, a12], [z21, v1b.value]])
    U2 = block_compose([[u2b.value, z12], [a21, v2b.value]])
    U1inv = block_triangular_inverse(U1, u1b.inverse, v1b.inverse, check=False)
    U2inv = block_triangular_inverse(
        U2, u2b.inverse, v2b.inverse, lower=True, check=False
    )

    fac1 = _block_triangular_factorization(
        R, n, n1, u1b, v1b, corner=u1b.inverse * a12, upper=True
    )
    fac2 = _block_triangular_factorization(
        R, n, n1, u2b, v2b, corner=v2b.inverse * a21, upper=False
    )

    return CleanDecomposition(
        target=a,
        idempotent=E,
        units=(
            UnitWitness(U1, U1inv, fac1),
            UnitWitness(U2, U2inv, fac2),
        ),
    )


def _block_triangular_factorization(
    R: Ring,
    n: int,
    n1: int,
    top: UnitWitness,
    bottom: UnitWitness,
    corner: Matrix,
    upper: bool,
) -> Optional[tuple[Generator, ...]]:
    """Generators for [[A,B],[0,D]] = diag(A,D) * [[I, A^-1 B],[0, I]]
    (mirrored for the lower-triangular case)."""
    if top.factorization is None or bottom.factorization is None:
        return None
    zero = R.zero
    gens: list[Generator] = []
    for g in top.factorization:
        gens.extend(embed_generator(R, g, 0, n1, n))
    for g in bottom.factorization:
        gens.extend(embed_generator(R, g, n1, n - n1, n))
    for i, row in enumerate(corner.data):
        for j, x in enumerate(row):
            if x == zero:
                continue
            if upper:
                gens.append(
                    ElementaryTransvection(i, n1 + j, Element(R, x), "column")
                )
            else:
                gens.append(
                    ElementaryTransvection(n1 + i, j, Element(R, x), "column")
                )
    return tuple(gens)


# ---------------------------------------------------------------------------
# element-level transformations


def lengthen_decomposition(d: CleanDecomposition) -> CleanDecomposition:
    """Trade the idempotent e for 1-e and append the self-inverse unit 2e-1."""
    e = d.idempotent
    one = e.one_like()
    new_idempotent = one - e
    u = e + e - one
    return CleanDecomposition(
        target=d.target,
        idempotent=new_idempotent,
        units=d.units + (UnitWitness(u, u, None),),
    )


def good_units_from_clean(a: Element, h_decomposition: CleanDecomposition) -> list[UnitWitness]:
    """Units summing to ``a`` from a clean decomposition of h = (a+1)/2.

    Given h = e + u_1 + ... + u_n with 2 invertible, a = 2h - 1 =
    (2e - 1) + 2u_1 + ... + 2u_n, and 2e - 1 is its own inverse.  Returns
    n+1 verified witnesses in that order.
    """
    ring = a.ring
    try:
        two_inv = Element(ring, ring.try_invert_payload(ring.from_int(2)))
    except NotAUnit:
        raise TwoNotInvertible(f"2 is not a unit in {ring}") from None
    h = (a + 1) * two_inv
    if h_decomposition.target != h:
        raise BadInput("the supplied decomposition is not of (a+1)/2")
    e = h_decomposition.idempotent
    one = e.one_like()
    lead = e + e - one
    units = [UnitWitness(lead, lead, None)]
    for w in h_decomposition.units:
        units.append(UnitWitness(w.value + w.value, w.inverse * two_inv, None))
    return units


def local_two_clean(a: Element) -> CleanDecomposition:
    """Two-unit scalar rule: a = 0 + 1 + (a-1) when a-1 is a unit, else
    a = 1 + a + (-1) when a is a unit.  Total over local rings, where one
    of the two always holds; NoScalarRule otherwise."""
    ring = a.ring
    one = Element(ring, ring.one)
    zero = Element(ring, ring.zero)
    try:
        w = (a - 1).try_invert()
        return CleanDecomposition(
            target=a,
            idempotent=zero,
            units=(UnitWitness(one, one, None), w),
        )
    except NotAUnit:
        pass
    try:
        w = a.try_invert()
    except NotAUnit:
        raise NoScalarRule(
            f"neither {ring.fmt(a.value)} nor its predecessor is a unit in {ring}"
        ) from None
    minus_one = -one
    return CleanDecomposition(
        target=a,
        idempotent=one,
        units=(w, UnitWitness(minus_one, minus_one, None)),
    )
