"""Residue-class bias of two-prime products and of RSA-integers.

The unrestricted ratio counts unordered pairs of odd primes p < q (no p = 2,
no squares). This is the convention that reproduces r(10^6) = 1.183 and
r(10^7) = 1.162; counting p = 2 gives values near 0.95 instead.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .counting import ALL_PRIMES, ClassConstraint, RatioParam, count_rsa_classes, count_rsa_decomposed, count_semiprime_pairs
from .errors import DomainError, UndefinedRatioError


@dataclass(frozen=True)
class BiasConstants:
    """Reference constant only: the unrestricted bias decays like 1 + beta / log log x."""

    beta: float = 0.334

    def expected_ratio(self, x):
        return 1.0 + self.beta / math.log(math.log(x))


BIAS_CONSTANTS = BiasConstants()

THREE_MOD_FOUR = ClassConstraint(3, 4)


def euler_phi(d):
    if d < 1:
        raise DomainError("phi needs d >= 1")
    result, n, p = d, d, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def dummit_ratio(tables, x):
    """#{p < q odd, pq <= x, p = q = 3 mod 4} / (#{p < q odd, pq <= x} / 4)."""
    both = count_semiprime_pairs(tables, x, THREE_MOD_FOUR, THREE_MOD_FOUR, odd_only=True)
    total = count_semiprime_pairs(tables, x, odd_only=True)
    if total == 0:
        raise UndefinedRatioError(f"no odd semiprimes up to {x}")
    return 4 * both / total


def rsa_bias_ratio(tables, x, r, c1=ALL_PRIMES, c2=ALL_PRIMES):
    """phi(d1) phi(d2) D_r(x) / C_r(x)."""
    total = count_rsa_decomposed(tables, x, r)
    if total == 0:
        raise UndefinedRatioError(f"no RSA-integers up to {x} for r={r}")
    restricted = count_rsa_classes(tables, x, r, c1, c2)
    return euler_phi(c1.d) * euler_phi(c2.d) * restricted / total


@dataclass(frozen=True)
class RaceRecord:
    x: int
    counts: tuple  # (count for first class pair, count for second)
    lead: int
    cumulative_lead_fraction: float


def geometric_grid(lo, hi, points):
    """``points`` integers spaced evenly in log between ``lo`` and ``hi`` inclusive."""
    if points < 1 or lo < 1 or hi < lo:
        raise DomainError(f"bad grid {lo}:{hi}:{points}")
    if points == 1:
        return [int(round(lo))]
    step = math.log(hi / lo) / (points - 1)
    return [int(round(lo * math.exp(i * step))) for i in range(points)]


def race(tables, r, first, second, grid, threads=1):
    """Race D_r counts of two class pairs along an ascending x-grid.

    ``first`` and ``second`` are ``(c1, c2)`` pairs. The lead fraction is the
    share of grid points so far where ``first`` is strictly ahead; on a
    geometric grid this weights points equally in log x, a crude stand-in
    for logarithmic density.
    """
    r = RatioParam.coerce(r)
    grid = [int(x) for x in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("race grid must be ascending")

    def at(x):
        return (count_rsa_classes(tables, x, r, *first), count_rsa_classes(tables, x, r, *second))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            counts = list(pool.map(at, grid))
    else:
        counts = [at(x) for x in grid]

    records, ahead = [], 0
    for i, (x, (c_a, c_b)) in enumerate(zip(grid, counts), start=1):
        lead = c_a - c_b
        ahead += lead > 0
        records.append(RaceRecord(x, (c_a, c_b), lead, ahead / i))
    return records


def race_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "count_pair1", "count_pair2", "lead", "lead_fraction"])
    for rec in records:
        w.writerow([rec.x, rec.counts[0], rec.counts[1], rec.lead, f"{rec.cumulative_lead_fraction:.6f}"])
    return buf.getvalue()
