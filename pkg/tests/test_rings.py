"""Ring kinds: grammar, canonical forms, arithmetic, inversion, radicals."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from cleandecomp.errors import (
    BadInput,
    DenominatorNotUnit,
    DescriptorMismatch,
    NotAUnit,
    ParseError,
    UnsupportedRing,
)
from cleandecomp.rings import (
    Element,
    GroupRing,
    IntegersMod,
    LocalizedIntegers,
    MatrixRing,
    PolynomialRing,
    Q,
    Z,
    canonicalize,
    format_descriptor,
    jacobson_member,
    parse_descriptor,
    random_element,
    try_invert,
)

DESCRIPTORS = (
    "Z",
    "Q",
    "Zmod:2",
    "Zmod:6",
    "Zmod:7",
    "Zloc:2,3",
    "Poly:Q:x",
    "Mat:Zmod:2:2",
    "GrpC:Zloc:7:3",
    "GrpC:Zmod:2:3",
    "Poly:Zmod:4:t",
    "Mat:Poly:Zmod:3:t:2",
)


# ---------------------------------------------------------------------------
# descriptor grammar


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_descriptor_roundtrip(text):
    ring = parse_descriptor(text)
    assert format_descriptor(ring) == text
    assert parse_descriptor(format_descriptor(ring)) == ring


def test_descriptor_equality_is_structural():
    assert parse_descriptor("Zmod:6") == IntegersMod(6)
    assert parse_descriptor("Zloc:2,3") == LocalizedIntegers((2, 3))
    assert parse_descriptor("Zloc:3,2") == LocalizedIntegers((2, 3))  # sorted
    assert parse_descriptor("Mat:Zmod:2:2") == MatrixRing(IntegersMod(2), 2)
    assert parse_descriptor("GrpC:Zloc:7:3") == GroupRing(LocalizedIntegers((7,)), 3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "Frac:Q",
        "Zmod",
        "Zmod:x",
        "Zmod:1",
        "Zloc",
        "Zloc:4",
        "Zloc:2,2",
        "Poly:Q",
        "Poly:Q:9bad",
        "Mat:Q",
        "Mat:Q:0",
        "Q:extra",
        "GrpC:Q",
        "GrpC:Q:0",
    ],
)
def test_descriptor_rejects(text):
    with pytest.raises((ParseError, BadInput)):
        parse_descriptor(text)


# ---------------------------------------------------------------------------
# element grammar


def test_integer_grammar():
    assert Z.parse("-3") == -3
    assert Z.parse("0") == 0
    for bad in ("3.5", "++1", "3/4", "", "one"):
        with pytest.raises(ParseError):
            Z.parse(bad)


def test_rational_grammar():
    assert Q.parse("3/4") == mpq(3, 4)
    assert Q.parse("-3/4") == mpq(-3, 4)
    assert Q.parse("6/4") == mpq(3, 2)  # canonical reduced form
    assert Q.fmt(mpq(3, 2)) == "3/2"
    assert Q.fmt(mpq(-2)) == "-2"
    # denominators are bare positive integers; signs live on the numerator
    for bad in ("3/-4", "3/0", "3/04", "/4", "3/", "1.5"):
        with pytest.raises(ParseError):
            Q.parse(bad)


def test_residue_grammar_wraps():
    R = IntegersMod(6)
    assert R.parse("9") == 3
    assert R.parse("-1") == 5
    assert R.fmt(R.parse("-1")) == "5"


def test_localized_grammar_gates_denominators():
    L = LocalizedIntegers((2, 3))
    assert L.parse("1/5") == mpq(1, 5)
    for bad in ("1/2", "1/6", "5/9"):
        with pytest.raises(DenominatorNotUnit):
            L.parse(bad)
    # numerator may hit the primes; only denominators are restricted
    assert L.parse("6/5") == mpq(6, 5)


def test_polynomial_grammar():
    P = PolynomialRing(Q, "x")
    assert P.parse("1/2 + 3*x + 2*x^2") == (mpq(1, 2), mpq(3), mpq(2))
    assert P.parse("x") == (mpq(0), mpq(1))
    assert P.parse("-x^2") == (mpq(0), mpq(0), mpq(-1))
    assert P.parse("0") == ()
    # like terms combine; trailing zero coefficients trim away
    assert P.parse("x + x") == (mpq(0), mpq(2))
    assert P.parse("1 + x + -1*x") == (mpq(1),)
    for bad in ("x*x", "2**x", "", "x^-1"):
        with pytest.raises(ParseError):
            P.parse(bad)


def test_groupring_grammar():
    G = GroupRing(IntegersMod(2), 3)
    assert G.parse("1 + g^2") == (1, 0, 1)
    assert G.parse("g") == (0, 1, 0)
    # exponents wrap modulo the group order
    assert G.parse("g^3") == (1, 0, 0)
    assert G.parse("g^4") == (0, 1, 0)
    L = GroupRing(LocalizedIntegers((7,)), 3)
    assert L.parse("6 + 4*g") == (mpq(6), mpq(4), mpq(0))


def test_matrix_ring_grammar():
    M = MatrixRing(IntegersMod(2), 2)
    assert M.parse('[["1","0"],["1","1"]]') == ((1, 0), (1, 1))
    for bad in ("[[1,0],[1,1]]", '[["1","0"]]', "not json", '{"a":1}'):
        with pytest.raises(ParseError):
            M.parse(bad)


def test_canonicalize_entry_point():
    el = canonicalize("6/4", Q)
    assert el.ring is Q and el.value == mpq(3, 2)
    with pytest.raises(ParseError):
        canonicalize(3, Q)


# ---------------------------------------------------------------------------
# arithmetic fixtures


def test_residue_arithmetic():
    R = IntegersMod(6)
    assert R.add(4, 5) == 3
    assert R.mul(4, 5) == 2
    assert R.neg(2) == 4
    assert R.sub(1, 5) == 2
    assert R.from_int(-7) == 5


def test_polynomial_arithmetic_trims():
    P = PolynomialRing(Q, "x")
    a = P.parse("1 + x")
    b = P.parse("1 + -1*x")
    assert P.mul(a, b) == (mpq(1), mpq(0), mpq(-1))
    assert P.add(a, b) == (mpq(2),)
    assert P.sub(a, a) == ()
    assert P.degree(P.mul(a, a)) == 2
    assert P.degree(P.zero) == -1


def test_groupring_convolution_wraps():
    G = GroupRing(IntegersMod(5), 3)
    g = (0, 1, 0)
    g2 = G.mul(g, g)
    assert g2 == (0, 0, 1)
    assert G.mul(g2, g) == G.one
    assert G.augmentation((2, 3, 4)) == 4


def test_matrix_ring_arithmetic_is_noncommutative():
    M = MatrixRing(IntegersMod(2), 2)
    a = ((1, 1), (0, 1))
    b = ((1, 0), (1, 1))
    assert M.mul(a, b) != M.mul(b, a)
    assert M.mul(a, M.one) == a


# ---------------------------------------------------------------------------
# inversion


def test_inversion_fixtures():
    assert Z.try_invert_payload(-1) == -1
    with pytest.raises(NotAUnit):
        Z.try_invert_payload(2)

    assert Q.try_invert_payload(mpq(3, 4)) == mpq(4, 3)
    with pytest.raises(NotAUnit):
        Q.try_invert_payload(mpq(0))

    R7 = IntegersMod(7)
    assert R7.try_invert_payload(3) == 5
    with pytest.raises(NotAUnit):
        IntegersMod(6).try_invert_payload(2)

    L = LocalizedIntegers((2, 3))
    assert L.try_invert_payload(mpq(5, 7)) == mpq(7, 5)
    with pytest.raises(NotAUnit):
        L.try_invert_payload(mpq(2))
    with pytest.raises(NotAUnit):
        L.try_invert_payload(mpq(3, 5))


def test_polynomial_unit_with_nilpotent_tail():
    # over Zmod:4, 1 + 2t squares to 1, so it is its own inverse
    P = PolynomialRing(IntegersMod(4), "t")
    a = P.parse("1 + 2*t")
    assert P.try_invert_payload(a) == a
    with pytest.raises(NotAUnit):
        P.try_invert_payload(P.parse("1 + t"))
    with pytest.raises(NotAUnit):
        PolynomialRing(Q, "x").try_invert_payload((mpq(1), mpq(1)))


def test_matrix_ring_inversion_two_sided():
    M = MatrixRing(IntegersMod(6), 2)
    a = ((1, 2), (3, 1))
    inv = M.try_invert_payload(a)
    assert M.mul(a, inv) == M.one and M.mul(inv, a) == M.one
    with pytest.raises(NotAUnit):
        M.try_invert_payload(((2, 0), (0, 1)))


def test_groupring_inversion_two_sided():
    G = GroupRing(IntegersMod(2), 3)
    inv = G.try_invert_payload((0, 1, 0))
    assert inv == (0, 0, 1)
    with pytest.raises(NotAUnit):
        G.try_invert_payload((1, 1, 0))


def test_try_invert_element_witness():
    w = try_invert(Q.el(mpq(3, 4)))
    assert w.verify()
    assert w.inverse.value == mpq(4, 3)


# ---------------------------------------------------------------------------
# Jacobson radical membership


def test_jacobson_fixtures():
    L = LocalizedIntegers((2, 3))
    assert jacobson_member(L.el(mpq(6, 5)))
    assert jacobson_member(L.el(mpq(0)))
    assert not jacobson_member(L.el(mpq(2)))
    assert not jacobson_member(L.el(mpq(3)))

    R4 = IntegersMod(4)
    assert jacobson_member(R4.el(2))
    assert not jacobson_member(R4.el(1))

    M = MatrixRing(IntegersMod(4), 2)
    assert jacobson_member(M.el(((2, 0), (2, 2))))
    assert not jacobson_member(M.el(((2, 1), (0, 2))))


@pytest.mark.parametrize("ring", [Z, Q, IntegersMod(6), PolynomialRing(Q, "x")])
def test_jacobson_refuses_unsupported_rings(ring):
    with pytest.raises(UnsupportedRing):
        jacobson_member(ring.zero_el())


def test_locality_flags():
    assert IntegersMod(4).is_local()
    assert not IntegersMod(6).is_local()
    assert LocalizedIntegers((2,)).is_local()
    assert not LocalizedIntegers((2, 3)).is_local()
    assert not Z.is_local()


# ---------------------------------------------------------------------------
# element wrapper


def test_element_operators_and_mixing():
    a = Q.el(mpq(1, 2))
    b = Q.el(mpq(1, 3))
    assert (a + b).value == mpq(5, 6)
    assert (a - b).value == mpq(1, 6)
    assert (a * b).value == mpq(1, 6)
    assert (-a).value == mpq(-1, 2)
    assert a + 1 == Q.el(mpq(3, 2))
    assert 2 * a == Q.el(mpq(1))
    with pytest.raises(DescriptorMismatch):
        a + Z.el(1)


# ---------------------------------------------------------------------------
# properties


@pytest.mark.parametrize("text", DESCRIPTORS)
@given(seed=st.integers(0, 2**32 - 1))
def test_ring_axioms(text, seed):
    ring = parse_descriptor(text)
    rng = random.Random(seed)
    a, b, c = (ring.random_payload(rng) for _ in range(3))
    assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
    assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
    assert ring.mul(ring.add(a, b), c) == ring.add(ring.mul(a, c), ring.mul(b, c))
    assert ring.add(a, ring.neg(a)) == ring.zero
    assert ring.mul(ring.one, a) == a
    assert ring.mul(a, ring.one) == a
    assert ring.add(a, ring.zero) == a


@pytest.mark.parametrize("text", DESCRIPTORS)
@given(seed=st.integers(0, 2**32 - 1))
def test_parse_fmt_roundtrip(text, seed):
    ring = parse_descriptor(text)
    a = ring.random_payload(random.Random(seed))
    assert ring.parse(ring.fmt(a)) == a


@pytest.mark.parametrize("text", DESCRIPTORS)
@given(seed=st.integers(0, 2**32 - 1))
def test_canonical_is_idempotent(text, seed):
    ring = parse_descriptor(text)
    a = ring.random_payload(random.Random(seed))
    assert ring.canonical(a) == a
    assert ring.canonical(ring.canonical(a)) == ring.canonical(a)


def test_matrix_inversion_without_unit_pivot_in_first_column():
    # elimination alone cannot start on these; the commutative fallback
    # through the determinant must take over
    mz = MatrixRing(Z, 2)
    w = Element(mz, ((2, 5), (5, 13))).try_invert()
    assert w.verify()
    assert w.inverse.value == ((13, -5), (-5, 2))

    mp = MatrixRing(PolynomialRing(IntegersMod(3), "t"), 2)
    a = Element(mp, (((1, 0, 2), (2,)), ((1, 0, 1), (1,))))
    w = a.try_invert()
    assert w.verify()
    assert w.inverse.try_invert().inverse == a

    with pytest.raises(NotAUnit):
        Element(mz, ((2, 0), (0, 2))).try_invert()


@pytest.mark.parametrize("text", DESCRIPTORS)
@given(seed=st.integers(0, 2**32 - 1))
def test_double_inversion_returns_start(text, seed):
    ring = parse_descriptor(text)
    a = random_element(ring, random.Random(seed))
    try:
        w = a.try_invert()
    except NotAUnit:
        return
    back = w.inverse.try_invert()
    assert back.inverse == a
    assert w.verify()


def _euler_phi(n: int) -> int:
    out = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


def test_unit_counts_match_euler_phi():
    for n in range(2, 1001):
        ring = IntegersMod(n)
        units = 0
        for a in range(n):
            try:
                ring.try_invert_payload(a)
            except NotAUnit:
                continue
            units += 1
        assert units == _euler_phi(n), n
