"""Exact counts of RSA-integers pq (p < q <= r*p) and of two-prime products.

Every count is available by a direct double loop over prime pairs and by the
decomposition into sums of prime-counting values; the two must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._backend import INT64_SAFE, kernels
from . import _kernels_py
from .errors import CapacityError, DomainError


@dataclass(frozen=True)
class RatioParam:
    """The proportionality bound r = num/den > 1, kept exact."""

    num: int
    den: int = 1

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den <= 0 or num <= 0:
            raise DomainError(f"r must be a positive fraction, got {num}/{den}")
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)
        if self.num <= self.den:
            raise DomainError(f"r must exceed 1, got {self.num}/{self.den}")

    @classmethod
    def parse(cls, text):
        """Accept ``"num/den"`` or a bare integer string."""
        num, _, den = str(text).strip().partition("/")
        try:
            num, den = int(num), int(den) if den else 1
        except ValueError:
            raise DomainError(f"cannot parse r={text!r}; expected num/den") from None
        return cls(num, den)

    @classmethod
    def coerce(cls, r):
        if isinstance(r, cls):
            return r
        if isinstance(r, str):
            return cls.parse(r)
        if isinstance(r, float):
            raise DomainError("r must be exact; pass a Fraction, int or 'num/den'")
        f = Fraction(r)
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self):
        return Fraction(self.num, self.den)

    @property
    def value(self):
        return self.num / self.den

    @property
    def log(self):
        """rho = log r."""
        return math.log(self.num) - math.log(self.den)

    def __str__(self):
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class ClassConstraint:
    """Primes p with p % d == a; ``d == 1`` admits every prime."""

    a: int = 0
    d: int = 1

    def __post_init__(self):
        if self.d < 1 or not 0 <= self.a < self.d:
            raise DomainError(f"invalid residue class {self.a} mod {self.d}")

    @classmethod
    def parse(cls, text):
        a, sep, d = str(text).partition(":")
        try:
            if not sep:
                raise ValueError
            a, d = int(a), int(d)
        except ValueError:
            raise DomainError(f"cannot parse class {text!r}; expected a:d") from None
        return cls(a, d)

    def admits(self, p):
        return self.d == 1 or p % self.d == self.a

    def __str__(self):
        return f"{self.a}:{self.d}"


ALL_PRIMES = ClassConstraint()


@dataclass
class CountReport:
    x: int
    r: RatioParam
    c1: ClassConstraint
    c2: ClassConstraint
    exact: int
    fr_value: float | None = None
    series_values: dict = field(default_factory=dict)
    deviations: dict = field(default_factory=dict)

    def __post_init__(self):
        self.recompute_deviations()

    @property
    def density(self):
        """phi(d1)*phi(d2), the normaliser turning D_r into a C_r-sized count."""
        from .bias import euler_phi

        return euler_phi(self.c1.d) * euler_phi(self.c2.d)

    def recompute_deviations(self):
        scaled = self.density * self.exact
        dev = {}
        if self.fr_value:
            dev["fr"] = scaled / self.fr_value - 1.0
        for n, v in sorted(self.series_values.items()):
            if v:
                dev[f"series_n{n}"] = scaled / v - 1.0
        self.deviations = dev


def _pick(*ints):
    return kernels if max(ints) < INT64_SAFE else _kernels_py


def _require(tables, need, what):
    if tables.limit < need:
        raise CapacityError(f"{what} needs primes up to {need}, tables stop at {tables.limit}")


def _rsa_need(x, r):
    return math.isqrt(x * r.num // r.den)


def count_rsa_exact(tables, x, r):
    """C_r(x) by direct enumeration of pairs p < q <= r*p, p*q <= x."""
    return count_rsa_classes(tables, x, r, ALL_PRIMES, ALL_PRIMES, mode="oracle")


def count_rsa_decomposed(tables, x, r):
    """C_r(x) = -sum pi(p) + sum_{p <= sqrt(x/r)} pi(rp) + sum_{sqrt(x/r) < p <= sqrt(x)} pi(x/p)."""
    return count_rsa_classes(tables, x, r, ALL_PRIMES, ALL_PRIMES, mode="fast")


def count_rsa_classes(tables, x, r, c1=ALL_PRIMES, c2=ALL_PRIMES, mode="fast"):
    """D_r(x): RSA-integers pq <= x with p in class ``c1`` and q in class ``c2``.

    ``mode="fast"`` uses class-restricted prime counts at the split points;
    ``mode="oracle"`` filters the double loop over pairs.
    """
    x = int(x)
    r = RatioParam.coerce(r)
    if x < 0:
        raise DomainError("x must be >= 0")
    _require(tables, _rsa_need(x, r), f"C_r({x}) with r={r}")
    k = _pick(x * max(r.num, r.den))
    if mode == "oracle":
        return int(k.pair_count_direct(tables.primes, x, r.num, r.den, c1.d, c1.a, c2.d, c2.a))
    if mode != "fast":
        raise DomainError(f"unknown mode {mode!r}")
    base2 = tables.base_for(c2.d, c2.a)
    return int(k.decomposed_count(tables.primes, tables.words, base2, x, r.num, r.den, c1.d, c1.a, c2.d, c2.a))


def count_semiprime_pairs(tables, x, c1=ALL_PRIMES, c2=ALL_PRIMES, odd_only=False):
    """#{p < q : pq <= x, p in c1, q in c2}, with p >= 3 when ``odd_only``."""
    x = int(x)
    pmin = 3 if odd_only else 2
    _require(tables, x // pmin, f"semiprime count to {x}")
    base2 = tables.base_for(c2.d, c2.a)
    k = _pick(x)
    return int(k.semiprime_sum(tables.primes, tables.words, base2, x, c1.d, c1.a, c2.d, c2.a, pmin))


def count_report(tables, x, r, c1=ALL_PRIMES, c2=ALL_PRIMES, ns=(2, 4, 6), spec=None):
    """Exact D_r(x) next to F_r(x) and the truncated series for several orders."""
    from .analytic import f_r
    from .coefficients import series_eval

    r = RatioParam.coerce(r)
    exact = count_rsa_classes(tables, x, r, c1, c2)
    fr = f_r(x, r, spec) if x >= 2 * r.fraction else None
    series = {n: series_eval(x, r.value, n) for n in ns} if x > 1 else {}
    return CountReport(int(x), r, c1, c2, exact, fr, series)
