"""Exact coefficients of the expansion F_r(x) ~ sum_k a_k(r) x / log^(k+1) x.

a_k(r) = sum_{j=1}^{floor((k+1)/2)} 2 k! / ((2j-1)! (2j-1)) * rho^(2j-1), rho = log r.
Coefficients are ``Fraction``s; floats appear only when a polynomial is evaluated.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class RhoPoly:
    """Sparse polynomial in rho: exponent -> Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {int(e): Fraction(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, coeff, exponent):
        return cls({exponent: coeff})

    def __add__(self, other):
        if not isinstance(other, RhoPoly):
            other = RhoPoly({0: other})
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return RhoPoly(out)

    __radd__ = __add__

    def __mul__(self, scalar):
        if isinstance(scalar, RhoPoly):
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in scalar.terms.items():
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
            return RhoPoly(out)
        return RhoPoly({e: c * scalar for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RhoPoly):
            other = RhoPoly({0: other})
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __call__(self, rho):
        return math.fsum(float(c) * rho**e for e, c in self.terms.items())

    def is_odd(self):
        return all(e % 2 == 1 for e in self.terms)

    def __repr__(self):
        return f"RhoPoly({dict(sorted(self.terms.items()))})"

    def render(self, symbol="ρ"):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            power = symbol if e == 1 else f"{symbol}{str(e).translate(_SUPERSCRIPT)}" if e else ""
            text = f"{c.numerator}{power}"
            if c.denominator != 1:
                text += f"/{c.denominator}"
            parts.append(text)
        return " + ".join(parts)


@dataclass(frozen=True)
class AkPolynomial:
    """a_k(r) as exact coefficients of rho, rho^3, ..., rho^(2J-1)."""

    k: int
    coeffs: tuple

    def as_poly(self):
        return RhoPoly({2 * j - 1: c for j, c in enumerate(self.coeffs, start=1)})

    def __call__(self, rho):
        return self.as_poly()(rho)

    def __str__(self):
        return self.as_poly().render()


def ak_coefficient(k, j):
    """a_{k,j} = 2 k! / ((2j-1)! (2j-1))."""
    return Fraction(2 * math.factorial(k), math.factorial(2 * j - 1) * (2 * j - 1))


def ak_polynomial(k):
    if k < 1:
        raise ValueError("k must be >= 1")
    return AkPolynomial(k, tuple(ak_coefficient(k, j) for j in range(1, (k + 1) // 2 + 1)))


def ak_eval(k, r):
    """a_k(r) at a real r > 1."""
    if not r > 1:
        raise ValueError(f"r must exceed 1, got {r}")
    return ak_polynomial(k)(math.log(r))


def series_terms(x, r, n):
    """The individual terms a_k(r) x / log^(k+1) x for k = 1..n-1."""
    if not x > 1:
        raise ValueError(f"x must exceed 1, got {x}")
    if n < 2:
        raise ValueError("n must be >= 2")
    lx = math.log(x)
    return [ak_eval(k, r) * x / lx ** (k + 1) for k in range(1, n)]


def series_eval(x, r, n):
    """Truncated expansion sum_{k=1}^{n-1} a_k(r) x / log^(k+1) x."""
    return math.fsum(series_terms(x, r, n))


@dataclass(frozen=True)
class BSequence:
    """Non-negative weights b_1, b_2, ... of N_b(x) = sum_j b_j int_2^x dt / log^j t."""

    b: tuple
    n: int

    def __getitem__(self, j):
        return self.b[j - 1] if 1 <= j <= len(self.b) else 0

    @property
    def total(self):
        """B_n = b_1 + ... + b_n."""
        return sum((self[j] for j in range(1, self.n + 1)), start=0)


def nb_coefficients(b, n=None):
    """c_k = sum_{j<=k} b_j (k-1)!/(j-1)!, the coefficient of x/log^k x, for k = 1..n-1.

    Entries may be ints, Fractions or :class:`RhoPoly`; arithmetic stays exact.
    """
    if not isinstance(b, BSequence):
        b = BSequence(tuple(b), n if n is not None else len(b) + 1)
    n = b.n if n is None else n
    out = []
    for k in range(1, n):
        c = 0
        for j in range(1, k + 1):
            bj = b[j]
            if bj != 0:
                c = c + bj * Fraction(math.factorial(k - 1), math.factorial(j - 1))
        out.append(c)
    return out


def transport_weights(n):
    """b_j = 2 rho^(j-1)/(j-1) for even j, 0 for odd j, as a BSequence of RhoPolys."""
    b = tuple(
        RhoPoly.monomial(Fraction(2, j - 1), j - 1) if j % 2 == 0 else RhoPoly() for j in range(1, n)
    )
    return BSequence(b, n)


def mu(j):
    """Least k >= 2j-1 with (2j-1)! (2j-1) dividing k!, by direct search."""
    if j < 1:
        raise ValueError("j must be >= 1")
    m = 2 * j - 1
    divisor = math.factorial(m) * m
    k, fact = m, math.factorial(m)
    while fact % divisor:
        k += 1
        fact *= k
    return k


def _factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mu_formula(j):
    """2j-1 + max(e_p * p) over p^e_p || 2j-1, or None when some e_p > p."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if j == 1:
        return 1
    m = 2 * j - 1
    fac = _factor(m)
    if any(e > p for p, e in fac.items()):
        return None
    return m + max(e * p for p, e in fac.items())


def table1(kmax=10):
    """Rows ``(k, rendered a_k)`` for k = 1..kmax."""
    return [(k, str(ak_polynomial(k))) for k in range(1, kmax + 1)]


def table1_text(kmax=10):
    rows = table1(kmax)
    width = max(len(str(k)) for k, _ in rows)
    return "\n".join(f"{k:>{width}}  {text}" for k, text in rows) + "\n"


def table1_csv(kmax=10):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "j", "numerator", "denominator"])
    for k in range(1, kmax + 1):
        for j, c in enumerate(ak_polynomial(k).coeffs, start=1):
            w.writerow([k, j, c.numerator, c.denominator])
    return buf.getvalue()
