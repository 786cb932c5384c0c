"""Cyclic group rings: doubling-orbit test, idempotent catalogs, localized
clean checks, two-unit sums, and the coprime regrouping isomorphism."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from cleandecomp.decompose import CleanDecomposition, verify_decomposition
from cleandecomp.errors import (
    BadFactorization,
    BadInput,
    DescriptorMismatch,
    NotAUnit,
    NotInvertible,
    TooLarge,
    TwoNotInvertible,
    UnsupportedOrder,
    UnsupportedRing,
)
from cleandecomp.groupring import (
    clean_check_localized,
    cyclotomic,
    enumerate_idempotents_f2,
    explicit_idempotents,
    rational_idempotents,
    reduce_mod_p,
    regroup_iso,
    sigma_is_cyclic,
    two_good_group_ring,
    unit_invert_groupring,
)
from cleandecomp.rings import (
    Element,
    GroupRing,
    IntegersMod,
    LocalizedIntegers,
    Q,
)

ZL2 = LocalizedIntegers((2,))
ZL7C3 = GroupRing(LocalizedIntegers((7,)), 3)


# ---------------------------------------------------------------------------
# doubling orbit


def test_sigma_table():
    got = tuple(sigma_is_cyclic(m) for m in (3, 5, 7, 9, 11, 13))
    assert got == (True, True, False, False, True, True)


def test_sigma_rejects_bad_orders():
    for bad in (2, 4, 1, -3, "9"):
        with pytest.raises(BadInput):
            sigma_is_cyclic(bad)


@pytest.mark.parametrize("m", [3, 5, 7, 9, 11, 13, 15, 17, 19, 21])
def test_sigma_matches_independent_orbit_count(m):
    orbit = set()
    x = 1
    while x not in orbit:
        orbit.add(x)
        x = (2 * x) % m
    assert sigma_is_cyclic(m) == (len(orbit) == m - 1)


# ---------------------------------------------------------------------------
# idempotents over F2 and explicit quarters


def test_f2c3_idempotents_match_display():
    # 0, 1, 1 + g + g^2, g + g^2
    got = set(enumerate_idempotents_f2(3))
    assert got == {(0, 0, 0), (1, 0, 0), (1, 1, 1), (0, 1, 1)}


def test_f2c5_has_four_idempotents_f2c7_more():
    assert len(enumerate_idempotents_f2(5)) == 4
    assert len(enumerate_idempotents_f2(7)) > 4


def test_f2_enumeration_bounds():
    assert len(enumerate_idempotents_f2(1)) == 2
    with pytest.raises(BadInput):
        enumerate_idempotents_f2(0)
    with pytest.raises(TooLarge):
        enumerate_idempotents_f2(21)


@pytest.mark.parametrize("m", [3, 5])
def test_explicit_idempotents_over_localized_base(m):
    zero, one, f3, f4 = explicit_idempotents(m, ZL2)
    assert zero.value == GroupRing(ZL2, m).zero
    assert one.value == GroupRing(ZL2, m).one
    assert f3.is_idempotent() and f4.is_idempotent()
    assert f3 + f4 == one
    assert (f3 * f4).value == GroupRing(ZL2, m).zero
    assert f3.value == tuple(mpq(1, m) for _ in range(m))


def test_explicit_idempotents_need_invertible_order():
    with pytest.raises(NotInvertible):
        explicit_idempotents(3, IntegersMod(3))


# ---------------------------------------------------------------------------
# cyclotomic catalog


def test_cyclotomic_fixtures():
    assert cyclotomic(1) == (mpq(-1), mpq(1))
    assert cyclotomic(2) == (mpq(1), mpq(1))
    assert cyclotomic(6) == (mpq(1), mpq(-1), mpq(1))
    assert cyclotomic(12) == (mpq(1), mpq(0), mpq(-1), mpq(0), mpq(1))


@pytest.mark.parametrize("m", [2, 3, 4, 6, 12])
def test_cyclotomics_multiply_to_x_pow_m_minus_1(m):
    P = GroupRing(Q, 1)  # unused; multiply coefficient tuples directly
    prod = (mpq(1),)
    for d in range(1, m + 1):
        if m % d:
            continue
        phi = cyclotomic(d)
        out = [mpq(0)] * (len(prod) + len(phi) - 1)
        for i, a in enumerate(prod):
            for j, b in enumerate(phi):
                out[i + j] += a * b
        prod = tuple(out)
    expect = (mpq(-1),) + (mpq(0),) * (m - 1) + (mpq(1),)
    assert prod == expect


def test_catalog_m3_primitives():
    cat = rational_idempotents(3)
    assert cat.divisors == (1, 3)
    by_div = {e.divisors[0]: e for e in cat.primitive}
    assert by_div[1].coefficients == (mpq(1, 3), mpq(1, 3), mpq(1, 3))
    assert by_div[3].coefficients == (mpq(2, 3), mpq(-1, 3), mpq(-1, 3))
    assert [e.divisors for e in cat.entries] == [(), (1,), (3,), (1, 3)]
    assert cat.entries[3].coefficients == (mpq(1), mpq(0), mpq(0))


@pytest.mark.parametrize("m", [3, 4, 6, 12])
def test_catalog_entries_idempotent_orthogonal_complete(m):
    cat = rational_idempotents(m)
    ring = GroupRing(Q, m)
    for e in cat.entries:
        c = ring.canonical(e.coefficients)
        assert ring.mul(c, c) == c
    total = ring.zero
    prims = [ring.canonical(p.coefficients) for p in cat.primitive]
    for i, p in enumerate(prims):
        total = ring.add(total, p)
        for q in prims[i + 1 :]:
            assert ring.mul(p, q) == ring.zero
    assert total == ring.one
    assert len(cat.entries) == 2 ** len(cat.divisors)


def test_catalog_localization_filter():
    cat = rational_idempotents(3)
    # denominators divide 3, so localizing away from 3 keeps everything
    assert len(cat.localized_members((7,))) == 4
    # localizing at 3 keeps only the integral entries 0 and 1
    kept = cat.localized_members((3,))
    assert sorted(e.divisors for e in kept) == [(), (1, 3)]


# ---------------------------------------------------------------------------
# inversion


def test_groupring_inversion_fixtures():
    f2c3 = GroupRing(IntegersMod(2), 3)
    w = unit_invert_groupring(Element(f2c3, (0, 1, 0)))
    assert w.inverse.value == (0, 0, 1)
    with pytest.raises(NotAUnit):
        unit_invert_groupring(Element(f2c3, (1, 1, 0)))

    zl2c3 = GroupRing(ZL2, 3)
    w3 = unit_invert_groupring(Element(zl2c3, (mpq(3), mpq(0), mpq(0))))
    assert w3.inverse.value == (mpq(1, 3), mpq(0), mpq(0))
    with pytest.raises(NotAUnit):
        unit_invert_groupring(Element(zl2c3, (mpq(2), mpq(0), mpq(0))))
    with pytest.raises(DescriptorMismatch):
        unit_invert_groupring(Q.el(mpq(2)))


# ---------------------------------------------------------------------------
# localized clean checks


def test_clean_check_witnesses():
    zero = Element(ZL7C3, ZL7C3.zero)
    ok, (e, w) = clean_check_localized(zero)
    assert ok
    assert e.is_idempotent() and w.verify()
    assert e + w.value == zero

    gel = Element(ZL7C3, (mpq(0), mpq(1), mpq(0)))
    ok, (e, w) = clean_check_localized(gel)
    assert ok and e.value == ZL7C3.zero and w.value == gel


def test_clean_check_negative_witness_6_plus_4g():
    a = Element(ZL7C3, (mpq(6), mpq(4), mpq(0)))
    ok, wit = clean_check_localized(a)
    assert ok is False and wit is None


def test_clean_check_bounded_search_finds_non_clean_triples():
    non_clean = []
    for x in range(7):
        for y in range(7):
            for z in range(7):
                el = Element(ZL7C3, (mpq(x), mpq(y), mpq(z)))
                got, _ = clean_check_localized(el)
                if not got:
                    non_clean.append((x, y, z))
    assert (6, 4, 0) in non_clean
    assert len(non_clean) >= 1


def test_clean_check_requires_single_prime_localized_base():
    with pytest.raises(UnsupportedRing):
        clean_check_localized(Element(GroupRing(Q, 3), GroupRing(Q, 3).zero))
    two_primes = GroupRing(LocalizedIntegers((2, 3)), 3)
    with pytest.raises(UnsupportedRing):
        clean_check_localized(Element(two_primes, two_primes.zero))


# ---------------------------------------------------------------------------
# two-unit sums


def test_two_good_fixtures():
    zl3c2 = GroupRing(LocalizedIntegers((3,)), 2)
    w1, w2 = two_good_group_ring(Element(zl3c2, zl3c2.zero))
    assert w1.value.value == (mpq(-1), mpq(0))
    assert w2.value.value == (mpq(1), mpq(0))
    assert w1.verify() and w2.verify()

    zl5c2 = GroupRing(LocalizedIntegers((5,)), 2)
    gel = Element(zl5c2, (mpq(0), mpq(1)))
    w1, w2 = two_good_group_ring(gel)
    assert w1.value.value == (mpq(0), mpq(-1))
    assert w2.value.value == (mpq(0), mpq(2))
    assert w1.value + w2.value == gel


def test_two_good_exhaustive_residue_cube_over_zloc5_c3():
    ring = GroupRing(LocalizedIntegers((5,)), 3)
    count = 0
    for x in range(5):
        for y in range(5):
            for z in range(5):
                el = Element(ring, (mpq(x), mpq(y), mpq(z)))
                w1, w2 = two_good_group_ring(el)
                assert w1.verify() and w2.verify()
                assert w1.value + w2.value == el
                count += 1
    assert count == 125


def test_two_good_random_over_zloc3_c4(rng):
    ring = GroupRing(LocalizedIntegers((3,)), 4)
    for _ in range(100):
        el = Element(ring, tuple(mpq(rng.randrange(-9, 10)) for _ in range(4)))
        w1, w2 = two_good_group_ring(el)
        assert w1.verify() and w2.verify()
        assert w1.value + w2.value == el


def test_two_good_split_residue_fallback():
    # over Zloc:7 C3 the residue ring gains idempotents with no localized
    # lift, forcing the direct unit-pair route
    a = Element(ZL7C3, (mpq(5), mpq(2), mpq(8)))
    w1, w2 = two_good_group_ring(a)
    assert w1.verify() and w2.verify()
    assert w1.value + w2.value == a


def test_two_good_error_paths():
    zl2c3 = GroupRing(ZL2, 3)
    with pytest.raises(TwoNotInvertible):
        two_good_group_ring(Element(zl2c3, zl2c3.one))
    zl3c6 = GroupRing(LocalizedIntegers((3,)), 6)
    with pytest.raises(UnsupportedOrder):
        two_good_group_ring(Element(zl3c6, zl3c6.zero))


def test_two_good_pair_wraps_as_clean_decomposition():
    ring = GroupRing(LocalizedIntegers((5,)), 3)
    rng = random.Random(11)
    for _ in range(20):
        a = Element(ring, tuple(mpq(rng.randrange(-6, 7)) for _ in range(3)))
        w1, w2 = two_good_group_ring(a)
        dec = CleanDecomposition(
            target=a, idempotent=Element(ring, ring.zero), units=(w1, w2)
        )
        assert verify_decomposition(dec).all_ok


def test_reduce_mod_p():
    a = Element(ZL7C3, (mpq(1, 2), mpq(-1), mpq(9)))
    r = reduce_mod_p(a, 7)
    assert r.ring == GroupRing(IntegersMod(7), 3)
    assert r.value == (4, 6, 2)
    with pytest.raises(BadInput):
        reduce_mod_p(Element(ZL7C3, (mpq(1, 7), mpq(0), mpq(0))), 7)


# ---------------------------------------------------------------------------
# augmentation is a ring map


@given(seed=st.integers(0, 2**32 - 1))
def test_augmentation_ring_map(seed):
    rng = random.Random(seed)
    ring = rng.choice((GroupRing(IntegersMod(6), 4), GroupRing(Q, 3)))
    x = ring.random_payload(rng)
    y = ring.random_payload(rng)
    aug = ring.augmentation
    base = ring.base
    assert aug(ring.add(x, y)) == base.add(aug(x), aug(y))
    assert aug(ring.mul(x, y)) == base.mul(aug(x), aug(y))
    assert aug(ring.one) == base.one


# ---------------------------------------------------------------------------
# regrouping C_n = C_{p^k} x C_m


def test_regroup_iso_structure():
    iso = regroup_iso(6, 3)
    assert (iso.k, iso.m, iso.prime_power) == (1, 2, 3)
    assert iso.split_index(5) == (2, 1)
    assert iso.split_index(4) == (1, 0)
    iso12 = regroup_iso(12, 2)
    assert (iso12.k, iso12.m, iso12.prime_power) == (2, 3, 4)


def test_regroup_iso_is_a_ring_isomorphism(rng):
    iso = regroup_iso(6, 3)
    ring = GroupRing(IntegersMod(5), 6)
    nested = iso.nested_ring(IntegersMod(5))
    for _ in range(50):
        x = Element(ring, tuple(rng.randrange(5) for _ in range(6)))
        y = Element(ring, tuple(rng.randrange(5) for _ in range(6)))
        nx, ny = iso.to_nested(x), iso.to_nested(y)
        assert iso.from_nested(nx) == x
        assert iso.to_nested(x * y).value == nested.mul(nx.value, ny.value)
        assert iso.to_nested(x + y).value == nested.add(nx.value, ny.value)
    assert iso.to_nested(Element(ring, ring.one)).value == nested.one


def test_regroup_iso_rejections():
    with pytest.raises(BadFactorization):
        regroup_iso(6, 5)
    with pytest.raises(BadFactorization):
        regroup_iso(6, 4)
    with pytest.raises(BadInput):
        regroup_iso(0, 2)
    with pytest.raises(DescriptorMismatch):
        regroup_iso(6, 2).to_nested(Q.el(mpq(1)))
