import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from rsaint.bias import euler_phi
from rsaint.counting import (
    ALL_PRIMES,
    ClassConstraint,
    RatioParam,
    count_report,
    count_rsa_classes,
    count_rsa_decomposed,
    count_rsa_exact,
    count_semiprime_pairs,
)
from rsaint.errors import CapacityError, DomainError
from rsaint.sieve import build_tables

from conftest import trial_division_primes


def factor_pairs(x):
    """(p, q) with p < q primes and p*q = n, for every n <= x, by trial division of n."""
    out = []
    for n in range(6, x + 1):
        p = next((d for d in range(2, math.isqrt(n) + 1) if n % d == 0), None)
        if p is None:
            continue
        q = n // p
        if q > p and all(q % d for d in range(2, math.isqrt(q) + 1)):
            out.append((p, q))
    return out


PAIRS_3000 = factor_pairs(3000)


def oracle_count(x, r, c1=ALL_PRIMES, c2=ALL_PRIMES):
    r = Fraction(r)
    return sum(1 for p, q in PAIRS_3000 if p * q <= x and q <= r * p and c1.admits(p) and c2.admits(q))


T = build_tables(3000, {4, 10})


def test_ratio_param():
    r = RatioParam(6, 4)
    assert (r.num, r.den) == (3, 2)
    assert RatioParam.parse("2/1") == RatioParam(2) == RatioParam.coerce(Fraction(4, 2))
    assert str(RatioParam.parse("10")) == "10/1"
    for bad in ("1/1", "2/3", "x", "0/1", "3/0"):
        with pytest.raises(DomainError):
            RatioParam.parse(bad)
    with pytest.raises(DomainError):
        RatioParam.coerce(1.5)


def test_class_constraint():
    assert ClassConstraint.parse("3:4") == ClassConstraint(3, 4)
    for bad in ("4:4", "3", "-1:4", "a:b"):
        with pytest.raises(DomainError):
            ClassConstraint.parse(bad)


@pytest.mark.parametrize(
    "x,r,expected",
    [(100, RatioParam(2), 5), (100, RatioParam(6, 5), 0), (5, RatioParam(2), 0), (30, RatioParam(2), 2)],
)
def test_rsa_examples(x, r, expected):
    assert count_rsa_exact(T, x, r) == expected
    assert count_rsa_decomposed(T, x, r) == expected
    assert oracle_count(x, r.fraction) == expected


def test_rsa_pairs_listed():
    assert [(p, q) for p, q in PAIRS_3000 if p * q <= 100 and q <= 2 * p] == [(2, 3), (3, 5), (5, 7), (7, 11), (7, 13)]


@pytest.mark.parametrize(
    "c1,c2,expected",
    [((3, 4), (3, 4), 1), ((0, 1), (0, 1), 5)],
)
def test_class_examples(c1, c2, expected):
    c1, c2 = ClassConstraint(*c1), ClassConstraint(*c2)
    for mode in ("fast", "oracle"):
        assert count_rsa_classes(T, 100, RatioParam(2), c1, c2, mode=mode) == expected
        assert count_rsa_classes(T, 5, RatioParam(2), c1, c2, mode=mode) == 0


@pytest.mark.parametrize("r", ["3/2", "2", "3", "10", "101/100", "7/3"])
def test_against_factorisation_oracle(r):
    r = RatioParam.parse(r)
    for x in range(0, 3001, 37):
        expected = oracle_count(x, r.fraction)
        assert count_rsa_exact(T, x, r) == expected
        assert count_rsa_decomposed(T, x, r) == expected


@pytest.mark.parametrize("d", [4, 10])
def test_classes_against_oracle(d):
    r = RatioParam(5, 2)
    for a1, a2 in product(range(d), repeat=2):
        c1, c2 = ClassConstraint(a1, d), ClassConstraint(a2, d)
        for x in (500, 1777, 3000):
            expected = oracle_count(x, r.fraction, c1, c2)
            assert count_rsa_classes(T, x, r, c1, c2, "fast") == expected
            assert count_rsa_classes(T, x, r, c1, c2, "oracle") == expected


def test_boundary_ties_are_exact():
    # q = r p exactly: (2, 3) with r = 3/2 and (3, 5) with r = 5/3 must be counted
    assert count_rsa_exact(T, 6, RatioParam(3, 2)) == 1
    assert count_rsa_decomposed(T, 6, RatioParam(3, 2)) == 1
    assert count_rsa_exact(T, 15, RatioParam(5, 3)) == 2
    assert count_rsa_decomposed(T, 15, RatioParam(5, 3)) == 2
    # just below the tie
    assert count_rsa_exact(T, 15, RatioParam(166, 100)) == 1
    assert count_rsa_decomposed(T, 15, RatioParam(166, 100)) == 1
    # x = p*q exactly is included, p*p never
    assert count_rsa_exact(T, 35, RatioParam(2)) == 3
    assert count_rsa_decomposed(T, 49, RatioParam(2)) == 3


def test_class_partition(small_tables):
    # summing over all residue pairs mod 4 (including the classes of 2) gives C_r
    for x, r in [(10**4, RatioParam(2)), (54_321, RatioParam(3, 2))]:
        total = sum(
            count_rsa_classes(small_tables, x, r, ClassConstraint(a1, 4), ClassConstraint(a2, 4))
            for a1, a2 in product(range(4), repeat=2)
        )
        assert total == count_rsa_exact(small_tables, x, r)


def test_trivial_class_equals_unconstrained(small_tables):
    r = RatioParam(3)
    assert count_rsa_classes(small_tables, 77_777, r, ClassConstraint(0, 1), ClassConstraint(0, 1)) == count_rsa_exact(
        small_tables, 77_777, r
    )


@settings(max_examples=60, deadline=None)
@given(x=st.integers(0, 2_000_000), num=st.integers(2, 40), den=st.integers(1, 20))
def test_monotone_in_x_and_r(small_tables, x, num, den):
    if num <= den:
        num, den = den + num, den
    r = RatioParam(num, den)
    bigger = RatioParam(num + 1, den)
    if math.isqrt((x + 1000) * bigger.num // bigger.den) > small_tables.limit:
        return
    c = count_rsa_decomposed(small_tables, x, r)
    assert count_rsa_decomposed(small_tables, x + 1000, r) >= c
    assert count_rsa_decomposed(small_tables, x, bigger) >= c


@settings(max_examples=40, deadline=None)
@given(x=st.integers(0, 10**6), num=st.integers(2, 30), den=st.integers(1, 10))
def test_fast_equals_oracle_property(small_tables, x, num, den):
    if num <= den:
        return
    r = RatioParam(num, den)
    if math.isqrt(x * r.num // r.den) > small_tables.limit:
        return
    assert count_rsa_decomposed(small_tables, x, r) == count_rsa_exact(small_tables, x, r)


def test_capacity_error():
    t = build_tables(50)
    with pytest.raises(CapacityError):
        count_rsa_exact(t, 10_000, RatioParam(2))
    with pytest.raises(CapacityError):
        count_semiprime_pairs(t, 1000)


def test_huge_ratio_uses_python_ints():
    # x * num overflows int64; the pure-Python kernels take over
    t = build_tables(1000)
    r = RatioParam(2**62 + 1, 2**61)
    assert count_rsa_exact(t, 100, r) == count_rsa_decomposed(t, 100, r) == oracle_count(100, r.fraction)


def odd_pairs(x, c1=ALL_PRIMES, c2=ALL_PRIMES, odd=True):
    return sum(
        1 for p, q in PAIRS_3000 if p * q <= x and (p > 2 or not odd) and c1.admits(p) and c2.admits(q)
    )


def test_semiprime_examples():
    assert count_semiprime_pairs(T, 100, odd_only=True) == 16 == odd_pairs(100)
    c = ClassConstraint(3, 4)
    assert count_semiprime_pairs(T, 100, c, c) == 6 == odd_pairs(100, c, c)
    assert count_semiprime_pairs(T, 8, odd_only=True) == 0
    for x in range(0, 3001, 101):
        assert count_semiprime_pairs(T, x) == odd_pairs(x, odd=False)
        assert count_semiprime_pairs(T, x, odd_only=True) == odd_pairs(x)
        for a in (1, 3):
            ca = ClassConstraint(a, 4)
            assert count_semiprime_pairs(T, x, ca, c, odd_only=True) == odd_pairs(x, ca, c)


def test_count_report():
    rep = count_report(T, 1000, RatioParam(2), ClassConstraint(3, 4), ClassConstraint(1, 4))
    assert rep.exact == oracle_count(1000, 2, ClassConstraint(3, 4), ClassConstraint(1, 4))
    assert set(rep.series_values) == {2, 4, 6}
    assert rep.deviations["fr"] == pytest.approx(euler_phi(4) ** 2 * rep.exact / rep.fr_value - 1)
    small = count_report(T, 3, RatioParam(2))
    assert small.fr_value is None and "fr" not in small.deviations
