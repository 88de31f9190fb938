import csv
import io
import math

import pytest

from rsaint.bias import (
    BIAS_CONSTANTS,
    RaceRecord,
    dummit_ratio,
    euler_phi,
    geometric_grid,
    race,
    race_csv,
    rsa_bias_ratio,
)
from rsaint.counting import ALL_PRIMES, ClassConstraint, RatioParam, count_rsa_classes, count_rsa_exact
from rsaint.errors import DomainError, UndefinedRatioError


@pytest.mark.parametrize("d,phi", [(1, 1), (2, 1), (4, 2), (10, 4), (12, 4), (97, 96), (100, 40)])
def test_euler_phi(d, phi):
    assert euler_phi(d) == phi
    assert euler_phi(d) == sum(math.gcd(a, d) == 1 for a in range(1, d + 1))


def test_euler_phi_domain():
    with pytest.raises(DomainError):
        euler_phi(0)


def test_dummit_small(small_tables):
    assert dummit_ratio(small_tables, 100) == 1.5
    # 15 = 3*5 is the first odd pair
    assert dummit_ratio(small_tables, 15) == 0.0
    with pytest.raises(UndefinedRatioError):
        dummit_ratio(small_tables, 14)


def test_dummit_above_one(big_tables):
    for x in (10**4, 10**5, 10**6):
        assert dummit_ratio(big_tables, x) > 1


def test_reference_constant_is_documentation_only():
    assert BIAS_CONSTANTS.beta == 0.334
    assert 1 < BIAS_CONSTANTS.expected_ratio(1e6) < 1.2


def test_rsa_bias_examples(small_tables):
    c = ClassConstraint(3, 4)
    assert rsa_bias_ratio(small_tables, 100, RatioParam(2), c, c) == 0.8
    for x in (10, 100, 999, 5000):
        for r in (RatioParam(2), RatioParam(3, 2), RatioParam(10)):
            if count_rsa_exact(small_tables, x, r):
                assert rsa_bias_ratio(small_tables, x, r) == 1.0
    with pytest.raises(UndefinedRatioError):
        rsa_bias_ratio(small_tables, 5, RatioParam(2))


def _excluded(primes, x, r, d):
    """RSA pairs with a prime factor dividing d, by enumeration."""
    n = 0
    for p in primes:
        for q in primes:
            if p < q and p * q <= x and q * r.den <= r.num * p and (d % p == 0 or d % q == 0):
                n += 1
    return n


@pytest.mark.parametrize("d", [4, 10])
@pytest.mark.parametrize("x,r", [(500, RatioParam(2)), (5000, RatioParam(3)), (10**5, RatioParam(3, 2))])
def test_sum_rule(small_tables, d, x, r):
    classes = [ClassConstraint(a, d) for a in range(d) if math.gcd(a, d) == 1]
    total = sum(count_rsa_classes(small_tables, x, r, c1, c2) for c1 in classes for c2 in classes)
    # q <= r p <= sqrt(r x) < 400 here, well inside the first 200 primes
    small = small_tables.primes[:200].tolist()
    assert total == count_rsa_exact(small_tables, x, r) - _excluded(small, x, r, d)


def test_geometric_grid():
    g = geometric_grid(1000, 10**6, 4)
    assert g == [1000, 10000, 100000, 1000000]
    assert geometric_grid(50, 50, 1) == [50]
    with pytest.raises(DomainError):
        geometric_grid(10, 1, 3)


def test_race_identical_pairs(small_tables):
    c = ClassConstraint(3, 4)
    recs = race(small_tables, RatioParam(2), (c, c), (c, c), geometric_grid(100, 10**5, 8))
    assert all(rec.lead == 0 and rec.cumulative_lead_fraction == 0 for rec in recs)


@pytest.mark.parametrize(
    "d,first,second",
    [(4, (3, 3), (1, 1)), (10, (3, 3), (1, 1)), (10, (7, 7), (1, 9))],
)
def test_race_series(small_tables, d, first, second):
    pair = lambda ab: (ClassConstraint(ab[0], d), ClassConstraint(ab[1], d))
    grid = geometric_grid(10**3, 10**5, 20)
    recs = race(small_tables, RatioParam(2), pair(first), pair(second), grid)
    assert [rec.x for rec in recs] == grid
    for rec in recs:
        assert isinstance(rec, RaceRecord)
        assert rec.lead == rec.counts[0] - rec.counts[1]
        assert 0 <= rec.cumulative_lead_fraction <= 1
        assert rec.counts[0] == count_rsa_classes(small_tables, rec.x, RatioParam(2), *pair(first))
    rows = list(csv.reader(io.StringIO(race_csv(recs))))
    assert rows[0] == ["x", "count_pair1", "count_pair2", "lead", "lead_fraction"]
    assert len(rows) == 21
    assert all(len(row[4].split(".")[1]) == 6 for row in rows[1:])


def test_race_threads_same_output(small_tables):
    c3, c1 = ClassConstraint(3, 10), ClassConstraint(1, 10)
    grid = geometric_grid(10**3, 10**5, 15)
    one = race(small_tables, RatioParam(2), (c3, c3), (c1, c1), grid)
    many = race(small_tables, RatioParam(2), (c3, c3), (c1, c1), grid, threads=4)
    assert race_csv(one) == race_csv(many)


def test_race_rejects_descending_grid(small_tables):
    with pytest.raises(DomainError):
        race(small_tables, RatioParam(2), (ALL_PRIMES, ALL_PRIMES), (ALL_PRIMES, ALL_PRIMES), [100, 50])
