"""Logarithmic integral, the RSA variant F_r and its companion G_r, and checks.

Convention: Li(z) = integral from 2 to z of dt/log t, taken as 0 for z <= 2.
Passing ``signed=True`` keeps the integral itself for 1 < z < 2 (negative);
only then does G_r(x) - G_r(2r) = F_r(x) hold on all of x >= 2r. With the
clipped default the two agree up to a constant once x >= 4r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import ALL_PRIMES, ClassConstraint, RatioParam
from .errors import ConvergenceError, DomainError
from .quadrature import _NODES, _WG15, _WK15, DEFAULT_SPEC, QuadratureSpec, integrate
from .sieve import prime_count_ap, prime_count_many

__all__ = [
    "QuadratureSpec",
    "IdentityResidual",
    "li",
    "li_many",
    "f_r",
    "fr_integrand",
    "g_r",
    "gr_derivative",
    "gr_derivative_series",
    "li_expansion",
    "em_tail",
    "landau_estimate",
    "verify_summation_identities",
    "check_derivative",
]


@dataclass(frozen=True)
class IdentityResidual:
    identity_label: str
    lhs: float
    rhs: float

    @property
    def abs_residual(self):
        return abs(self.lhs - self.rhs)

    @property
    def rel_residual(self):
        return self.abs_residual / max(1.0, abs(self.lhs))


def li_many(zs, spec=None, signed=False):
    """Vectorized :func:`li`.

    Integrates e^u/u over u in [log 2, log z] with a Gauss-Kronrod pair on
    equal panels no wider than 1 in u; the panel count doubles until the
    summed |K15 - G7| meets the tolerance. Keeping the layout fixed for a given
    panel count makes the result smooth in z, so Li can itself sit inside an
    adaptive integrand.
    """
    spec = spec or DEFAULT_SPEC
    z = np.asarray(zs, dtype=float)
    flat = z.ravel()
    if np.any(~(flat >= 0)):
        raise DomainError("li needs x >= 0")
    if signed and np.any(flat <= 1):
        raise DomainError("signed Li diverges at 1")
    out = np.zeros_like(flat)
    live = flat > 2 if not signed else flat != 2
    if not live.any():
        return out.reshape(z.shape)
    u0 = math.log(2.0)
    u1 = np.log(flat[live])
    panels = max(1, int(math.ceil(float(np.max(np.abs(u1 - u0))))))
    for _ in range(spec.max_subdivisions):
        edges = u0 + (u1 - u0)[:, None] * (np.arange(panels + 1) / panels)[None, :]
        half = 0.5 * (edges[:, 1:] - edges[:, :-1])
        mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
        u = mid[..., None] + half[..., None] * _NODES
        vals = np.exp(u) / u
        k = (half * (vals @ _WK15)).sum(axis=1)
        err = (np.abs(half * (vals @ (_WK15 - _WG15)))).sum(axis=1)
        if np.all(err <= np.maximum(spec.abs_tol, spec.rel_tol * np.abs(k))):
            out[live] = k
            return out.reshape(z.shape)
        panels *= 2
    bad = int(np.argmax(err))
    raise ConvergenceError(f"Li({flat[live][bad]}) did not converge", float(k[bad]), float(err[bad]))


def li(x, spec=None, signed=False):
    """Li(x) = integral of 1/log t from 2 to x; 0 for x <= 2 unless ``signed``."""
    if x < 0 or math.isnan(x):
        raise DomainError(f"li needs x >= 0, got {x}")
    if signed and x <= 1:
        raise DomainError(f"signed Li diverges at 1; got x={x}")
    return float(li_many(np.array([float(x)]), spec, signed)[0])


def _ratio(r):
    """(r as float, rho = log r) from an exact ratio, a Fraction/int, or a float."""
    if isinstance(r, float):
        if not r > 1:
            raise DomainError(f"r must exceed 1, got {r}")
        return r, math.log(r)
    r = RatioParam.coerce(r)
    return r.value, r.log


def fr_integrand(t, r):
    """(log log sqrt(rt) - log log sqrt(t/r)) / log t, vectorized in ``t``."""
    _, rho = _ratio(r)
    lt = np.log(t)
    return np.log1p(2.0 * rho / (lt - rho)) / lt


def f_r(x, r, spec=None):
    """F_r(x), the integral of :func:`fr_integrand` from 2r to x (needs x >= 2r)."""
    rv, rho = _ratio(r)
    lower = 2.0 * rv
    if not isinstance(r, float):
        exact = RatioParam.coerce(r)
        too_small = x < 2 * exact.fraction if isinstance(x, int) else x < lower
    else:
        too_small = x < lower
    if too_small:
        raise DomainError(f"F_r(x) is defined for x >= 2r = {lower}, got x={x}")
    if x == lower:
        return 0.0

    def integrand(t):
        lt = np.log(t)
        return np.log1p(2.0 * rho / (lt - rho)) / lt

    return integrate(integrand, lower, float(x), spec)


def g_r(x, r, spec=None, signed=False):
    """G_r(x) = Li(sqrt x)^2 / 2 - int_{2r}^{sqrt(rx)} Li(t/r)/log t + int_{sqrt x}^{sqrt(rx)} Li(x/t)/log t.

    Reversed limits (x < 4r) count with negative sign. ``signed`` selects the
    Li convention; the signed one needs x > r.
    """
    rv, _ = _ratio(r)
    if x < 2 or (signed and not x > rv):
        raise DomainError(f"G_r needs x >= 2 (and x > r when signed), got {x}")
    x = float(x)
    root = math.sqrt(x)
    top = math.sqrt(rv * x)
    half_sq = 0.5 * li(root, spec, signed) ** 2
    short = integrate(lambda t: li_many(t / rv, spec, signed) / np.log(t), 2.0 * rv, top, spec)
    long_ = integrate(lambda t: li_many(x / t, spec, signed) / np.log(t), root, top, spec)
    return half_sq - short + long_


def gr_derivative(x, r):
    """Closed form of G_r'(x) = F_r'(x); needs x > r."""
    rv, rho = _ratio(r)
    if not x > rv:
        raise DomainError(f"G_r'(x) needs x > r = {rv}, got {x}")
    lx = math.log(x)
    return math.log1p(2.0 * rho / (lx - rho)) / lx


def gr_derivative_series(x, r, m):
    """First ``m`` odd terms of the Taylor expansion of G_r'(x) in u = log r / log x."""
    rv, rho = _ratio(r)
    if not x > rv:
        raise DomainError(f"needs x > r = {rv}, got {x}")
    lx = math.log(x)
    u = rho / lx
    return math.fsum(2.0 * u ** (2 * l - 1) / (2 * l - 1) for l in range(1, m + 1)) / lx


def li_expansion(x, n):
    """Truncated expansion sum_{k=1}^{n-1} (k-1)! x / log^k x."""
    if not x > 1:
        raise DomainError(f"li_expansion needs x > 1, got {x}")
    if n < 2:
        raise DomainError("n must be >= 2")
    lx = math.log(x)
    return math.fsum(math.factorial(k - 1) * x / lx**k for k in range(1, n))


def em_tail(u, m):
    """E_m(u) = log((1+u)/(1-u)) - 2 * sum_{l<=m} u^(2l-1)/(2l-1), for 0 <= u < 1."""
    if not 0 <= u < 1:
        raise DomainError(f"E_m(u) needs 0 <= u < 1, got {u}")
    if m < 1:
        raise DomainError("m must be >= 1")
    if u == 0:
        return 0.0
    if u <= 0.95:
        # summing the tail directly avoids cancellation for small u
        terms = []
        l = m + 1
        term = 2.0 * u ** (2 * l - 1) / (2 * l - 1)
        while term > 1e-18 * (terms[0] if terms else term):
            terms.append(term)
            l += 1
            term = 2.0 * u ** (2 * l - 1) / (2 * l - 1)
        return math.fsum(terms)
    head = math.fsum(2.0 * u ** (2 * l - 1) / (2 * l - 1) for l in range(1, m + 1))
    return math.log1p(2.0 * u / (1.0 - u)) - head


def landau_estimate(x, k):
    """x / log x * (log log x)^(k-1) / (k-1)!, needs x > e."""
    if not x > math.e:
        raise DomainError(f"landau_estimate needs x > e, got {x}")
    if k < 1:
        raise DomainError("k must be >= 1")
    lx = math.log(x)
    return x / lx * math.log(lx) ** (k - 1) / math.factorial(k - 1)


def _pi_s(tables, y, c):
    return prime_count_ap(tables, y, c.d, c.a) if c.d > 1 else tables.pi(y)


def verify_summation_identities(tables, x, r, c1=ALL_PRIMES, spec=None):
    """Check three exact identities, each side computed independently.

    ``li_rp_sum``:  sum_{p <= sqrt(x/r), p in S} Li(rp)
                    = pi_S(sqrt(x/r)) Li(sqrt(rx)) - int_2^{sqrt(rx)} pi_S(t/r)/log t dt
    ``li_xp_sum``:  sum_{sqrt(x/r) < p <= sqrt(x), p in S} Li(x/p)
                    = pi_S(sqrt x) Li(sqrt x) - pi_S(sqrt(x/r)) Li(sqrt(rx))
                      + int_{sqrt x}^{sqrt(rx)} pi_S(x/t)/log t dt
    ``half_li_squared``: int_2^{sqrt x} Li(t)/log t dt = Li(sqrt x)^2 / 2

    Left sides are sums over primes (or a nested quadrature); right sides
    integrate step functions built from the prime tables.
    """
    spec = spec or DEFAULT_SPEC
    x = int(x)
    r = RatioParam.coerce(r)
    c1 = c1 or ALL_PRIMES
    if x < 2 * r.fraction:
        raise DomainError(f"identities need x >= 2r, got x={x}, r={r}")
    num, den = r.num, r.den
    root_floor = math.isqrt(x)
    short_floor = math.isqrt(x * den // num)
    root = math.sqrt(x)
    top = math.sqrt(x * num / den)
    li_root = li(root, spec)
    li_top = li(top, spec)
    pi_root = _pi_s(tables, root_floor, c1)
    pi_short = _pi_s(tables, short_floor, c1)

    primes = [int(p) for p in tables.primes[: tables.pi(root_floor)] if c1.admits(int(p))]
    short_ps = [p for p in primes if p * p * num <= x * den]
    long_ps = [p for p in primes if p * p * num > x * den]

    def step(arg):
        def f(t):
            ys = np.floor(arg(t)).astype(np.int64)
            return prime_count_many(tables, ys, c1.d, c1.a) / np.log(t)

        return f

    lhs1 = math.fsum(li(num * p / den, spec) for p in short_ps)
    rhs1 = pi_short * li_top - integrate(step(lambda t: t * den / num), 2.0, top, spec)

    lhs2 = math.fsum(li(x / p, spec) for p in long_ps)
    rhs2 = pi_root * li_root - pi_short * li_top + integrate(step(lambda t: x / t), root, top, spec)

    lhs3 = integrate(lambda t: li_many(t, spec) / np.log(t), 2.0, root, spec)
    rhs3 = 0.5 * li_root**2

    return [
        IdentityResidual("li_rp_sum", lhs1, rhs1),
        IdentityResidual("li_xp_sum", lhs2, rhs2),
        IdentityResidual("half_li_squared", lhs3, rhs3),
    ]


DERIVATIVE_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15)


def check_derivative(x, r, rel_step=1e-3, spec=None):
    """Central difference of :func:`g_r` against :func:`gr_derivative` at ``x``."""
    spec = spec or DERIVATIVE_SPEC
    h = rel_step * x
    fd = (g_r(x + h, r, spec) - g_r(x - h, r, spec)) / (2 * h)
    return IdentityResidual("gr_derivative", fd, gr_derivative(x, r))
