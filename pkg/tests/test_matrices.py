"""Dense matrices, generator bookkeeping, and elimination-only inversion."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from cleandecomp.errors import (
    BadInput,
    DescriptorMismatch,
    NoUnitPivot,
    ShapeMismatch,
)
from cleandecomp.matrices import (
    ElementaryTransvection,
    Matrix,
    NegateAll,
    RowSwap,
    block_compose,
    block_triangular_inverse,
    element_witness,
    embed_generator,
    generator_matrix,
    generators_product,
    invert_generator,
    negation_generators,
    unit_pivot_invert,
)
from cleandecomp.rings import Element, IntegersMod, MatrixRing, Q, Z

from conftest import random_matrix

F2 = IntegersMod(2)
F7 = IntegersMod(7)
M2F2 = MatrixRing(F2, 2)


# ---------------------------------------------------------------------------
# construction and arithmetic


def test_shape_validation():
    with pytest.raises(ShapeMismatch):
        Matrix(Z, [])
    with pytest.raises(ShapeMismatch):
        Matrix(Z, [[1, 2], [3]])
    m = Matrix(Z, [[1, 2, 3]])
    assert (m.rows, m.cols) == (1, 3)


def test_arithmetic_fixtures():
    a = Matrix.of(IntegersMod(6), [[4, 5], [1, 2]])
    b = Matrix.of(IntegersMod(6), [[1, 1], [3, 0]])
    assert (a + b).data == ((5, 0), (4, 2))
    assert (a - b).data == ((3, 4), (4, 2))
    assert (a * b).data == ((1, 4), (1, 1))
    assert (-a).data == ((2, 1), (5, 4))
    with pytest.raises(ShapeMismatch):
        a + Matrix.of(IntegersMod(6), [[1, 2, 3]])
    with pytest.raises(DescriptorMismatch):
        a + Matrix.of(IntegersMod(7), [[1, 1], [1, 1]])
    with pytest.raises(ShapeMismatch):
        a * Matrix.of(IntegersMod(6), [[1], [2], [3]])


def test_rectangular_product_shapes():
    a = Matrix.of(Z, [[1, 2, 3]])
    b = Matrix.of(Z, [[1], [0], [2]])
    assert (a * b).data == ((7,),)
    assert (b * a).rows == 3 and (b * a).cols == 3


def test_element_conversion_roundtrip():
    m = Matrix.of(F2, [[1, 0], [1, 1]])
    el = m.to_element()
    assert el.ring == M2F2
    assert Matrix.from_element(el) == m
    with pytest.raises(ShapeMismatch):
        Matrix.of(Z, [[1, 2]]).to_element()
    with pytest.raises(DescriptorMismatch):
        Matrix.from_element(Q.el(mpq(1)))


def test_block_compose():
    a = Matrix.identity(Z, 2)
    z = Matrix.zeros(Z, 2, 1)
    c = Matrix.zeros(Z, 1, 2)
    d = Matrix.of(Z, [[5]])
    m = block_compose([[a, z], [c, d]])
    assert m.data == ((1, 0, 0), (0, 1, 0), (0, 0, 5))
    with pytest.raises(ShapeMismatch):
        block_compose([[a, z], [c]])
    with pytest.raises(ShapeMismatch):
        block_compose([[a, Matrix.zeros(Z, 1, 1)]])


def test_submatrix():
    m = Matrix.of(Z, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert m.submatrix(0, 2, 1, 3).data == ((2, 3), (5, 6))


# ---------------------------------------------------------------------------
# generators


def test_generator_validation():
    one = Z.el(1)
    with pytest.raises(BadInput):
        ElementaryTransvection(1, 1, one)
    with pytest.raises(BadInput):
        ElementaryTransvection(-1, 0, one)
    with pytest.raises(BadInput):
        ElementaryTransvection(0, 1, one, side="diag")
    with pytest.raises(BadInput):
        RowSwap(2, 2)
    with pytest.raises(BadInput):
        generator_matrix(Z, 2, ElementaryTransvection(0, 5, one))


def test_generator_matrices():
    g = ElementaryTransvection(1, 0, Z.el(3))
    assert generator_matrix(Z, 2, g).data == ((1, 0), (3, 1))
    assert generator_matrix(Z, 3, RowSwap(0, 2)).data == (
        (0, 0, 1),
        (0, 1, 0),
        (1, 0, 0),
    )
    assert generator_matrix(Z, 2, NegateAll()).data == ((-1, 0), (0, -1))


def test_invert_generator():
    for g in (
        ElementaryTransvection(0, 1, Z.el(4)),
        RowSwap(0, 1),
        NegateAll(),
    ):
        m = generator_matrix(Z, 3, g)
        mi = generator_matrix(Z, 3, invert_generator(g))
        assert (m * mi) == Matrix.identity(Z, 3)


@given(seed=st.integers(0, 2**32 - 1))
def test_generators_product_matches_explicit_multiplication(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    gens = []
    for _ in range(rng.randint(0, 6)):
        kind = rng.randrange(3)
        if kind == 0:
            i = rng.randrange(n)
            j = rng.randrange(n)
            if i == j:
                j = (j + 1) % n
            gens.append(ElementaryTransvection(i, j, Element(F7, rng.randrange(7))))
        elif kind == 1:
            i = rng.randrange(n)
            j = (i + 1 + rng.randrange(n - 1)) % n
            gens.append(RowSwap(min(i, j), max(i, j)))
        else:
            gens.append(NegateAll())
    acc = Matrix.identity(F7, n)
    for g in gens:
        acc = acc * generator_matrix(F7, n, g)
    assert generators_product(F7, n, gens) == acc


@pytest.mark.parametrize(
    "positions,n",
    [((), 3), ((0,), 3), ((1,), 3), ((0, 2), 3), ((0, 1, 2), 3), ((0,), 1), ((1, 3), 4)],
)
def test_negation_generators(positions, n):
    gens = negation_generators(Z, positions, n)
    expect = Matrix(
        Z,
        [[(-1 if i == j and i in positions else (1 if i == j else 0)) for j in range(n)] for i in range(n)],
    )
    assert generators_product(Z, n, gens) == expect


def test_negation_generators_rejects_bad_positions():
    with pytest.raises(BadInput):
        negation_generators(Z, (0, 0), 2)
    with pytest.raises(BadInput):
        negation_generators(Z, (5,), 2)


def test_embed_generator():
    g = ElementaryTransvection(0, 1, Z.el(2))
    embedded = embed_generator(Z, g, 2, 2, 4)
    assert len(embedded) == 1 and embedded[0].i == 2 and embedded[0].j == 3
    # negating a block embeds as the diagonal -1 factorization on its range
    neg = embed_generator(Z, NegateAll(), 1, 2, 4)
    expect = Matrix.of(Z, [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
    assert generators_product(Z, 4, neg) == expect


# ---------------------------------------------------------------------------
# inversion


def test_unit_pivot_fixtures():
    k1 = Matrix.of(Z, [[1, 1], [1, 0]])
    w = unit_pivot_invert(k1)
    assert w.inverse.data == ((0, 1), (1, -1))
    assert w.factorization is not None
    assert generators_product(Z, 2, w.factorization) == k1

    c = 5
    k2 = Matrix.of(Z, [[0, -1], [-1, c]])
    w2 = unit_pivot_invert(k2)
    assert w2.inverse.data == ((-c, -1), (-1, 0))
    assert w2.factorization is not None
    assert generators_product(Z, 2, w2.factorization) == k2


def test_unit_pivot_failures():
    with pytest.raises(NoUnitPivot):
        unit_pivot_invert(Matrix.of(Z, [[2, 0], [0, 2]]))
    with pytest.raises(NoUnitPivot):
        unit_pivot_invert(Matrix.of(IntegersMod(6), [[2, 0], [4, 1]]))
    with pytest.raises(ShapeMismatch):
        unit_pivot_invert(Matrix.of(Z, [[1, 0]]))


def test_unit_pivot_nontrivial_pivot_loses_factorization():
    m = Matrix.of(Q, [[2, 0], [0, 1]])
    w = unit_pivot_invert(m)
    assert w.inverse.data == ((mpq(1, 2), mpq(0)), (mpq(0), mpq(1)))
    assert w.factorization is None
    assert w.verify()


def test_unit_pivot_noncommutative_entries():
    # entries are themselves 2x2 matrices over F2
    a = M2F2.el(((1, 1), (0, 1)))
    b = M2F2.el(((0, 1), (1, 0)))
    zero = M2F2.zero_el()
    m = Matrix(M2F2, [[a.value, b.value], [zero.value, a.value]])
    w = unit_pivot_invert(m)
    ident = Matrix.identity(M2F2, 2)
    assert w.value * w.inverse == ident
    assert w.inverse * w.value == ident


@given(seed=st.integers(0, 2**32 - 1))
def test_unit_pivot_random_two_sided_and_factorization(seed):
    rng = random.Random(seed)
    ring = rng.choice((F2, F7, M2F2))
    n = rng.randint(1, 4)
    m = random_matrix(ring, n, rng)
    try:
        w = unit_pivot_invert(m)
    except NoUnitPivot:
        return
    ident = Matrix.identity(ring, n)
    assert w.value * w.inverse == ident and w.inverse * w.value == ident
    if w.factorization is not None:
        assert generators_product(ring, n, w.factorization) == m


@given(seed=st.integers(0, 2**32 - 1))
def test_block_triangular_inverse_agrees_with_elimination(seed):
    rng = random.Random(seed)
    ring = rng.choice((F7, Q))
    n1 = rng.randint(1, 3)
    n2 = rng.randint(1, 3)
    lower = rng.random() < 0.5

    def random_unit(k):
        while True:
            m = random_matrix(ring, k, rng)
            try:
                return m, unit_pivot_invert(m).inverse
            except NoUnitPivot:
                continue

    a, a_inv = random_unit(n1)
    d, d_inv = random_unit(n2)
    if lower:
        off = Matrix(
            ring, [[ring.random_payload(rng) for _ in range(n1)] for _ in range(n2)]
        )
        u = block_compose([[a, Matrix.zeros(ring, n1, n2)], [off, d]])
    else:
        off = Matrix(
            ring, [[ring.random_payload(rng) for _ in range(n2)] for _ in range(n1)]
        )
        u = block_compose([[a, off], [Matrix.zeros(ring, n2, n1), d]])
    got = block_triangular_inverse(u, a_inv, d_inv, lower=lower)
    assert got == unit_pivot_invert(u).inverse


def test_block_triangular_inverse_checks_claims():
    a = Matrix.identity(Z, 2)
    with pytest.raises(BadInput):
        # the lower-left block is not zero
        block_triangular_inverse(
            Matrix.of(Z, [[1, 0, 0], [0, 1, 0], [1, 0, 1]]),
            a,
            Matrix.identity(Z, 1),
        )
    with pytest.raises(BadInput):
        # claimed block inverses are wrong
        block_triangular_inverse(
            Matrix.of(Z, [[1, 0, 3], [0, 1, 0], [0, 0, 1]]),
            Matrix.of(Z, [[1, 1], [0, 1]]),
            Matrix.identity(Z, 1),
        )
    with pytest.raises(ShapeMismatch):
        block_triangular_inverse(Matrix.identity(Z, 3), a, a)


def test_element_witness_rewraps():
    m = Matrix.of(F2, [[1, 1], [0, 1]])
    w = element_witness(unit_pivot_invert(m))
    assert isinstance(w.value, Element) and w.value.ring == M2F2
    assert w.verify()
