"""Command-line entry point: ``rsaint <command> [options]``.

Exit codes: 0 ok, 1 verification failure, 2 usage, 3 capacity, 4 convergence.
Results go to stdout as CSV (default) or JSON; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .analytic import check_derivative, f_r, g_r, gr_derivative, verify_summation_identities
from .bias import BIAS_CONSTANTS, dummit_ratio, euler_phi, geometric_grid, race, rsa_bias_ratio
from .coefficients import ak_polynomial, mu, mu_formula, nb_coefficients, table1, transport_weights
from .counting import ALL_PRIMES, ClassConstraint, RatioParam, count_report
from .errors import CacheFormatError, CapacityError, ConvergenceError, RsaintError
from .quadrature import QuadratureSpec
from .sieve import build_tables, load_tables, save_tables

log = logging.getLogger("rsaint")

SCHEMA = "rsaint/1"
RESIDUAL_THRESHOLD = 1e-6
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY, EXIT_CONVERGENCE = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    sieve_limit: int | None = None
    moduli: list = field(default_factory=list)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    threads: int = 1
    output_format: str = "csv"
    cache_path: str | None = None

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.sieve_limit is not None and self.sieve_limit < 1:
            raise ValueError("sieve limit must be >= 1")


class UsageError(RsaintError):
    pass


def _int_value(text):
    """Integers, also written as 1e6 or 10**6."""
    text = text.strip()
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        value = Fraction(text) if "e" not in text.lower() else Fraction(float(text)).limit_denominator(1)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value.denominator != 1:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _ratio(text):
    try:
        return RatioParam.parse(text)
    except RsaintError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _klass(text):
    try:
        return ClassConstraint.parse(text)
    except RsaintError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _threads(text):
    if text == "auto":
        return os.cpu_count() or 1
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _grid(text):
    try:
        lo, hi, pts = text.split(":")
        return geometric_grid(_int_value(lo), _int_value(hi), int(pts))
    except (ValueError, RsaintError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:points, got {text!r}") from None


def _orders(text):
    try:
        ns = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}") from None
    if any(n < 2 for n in ns):
        raise argparse.ArgumentTypeError("series orders must be >= 2")
    return ns


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(cfg, command, columns, rows, out):
    if cfg.output_format == "json":
        doc = {
            "schema": SCHEMA,
            "command": command,
            "columns": columns,
            "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows],
        }
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    out.write(buf.getvalue())


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def get_tables(cfg, need, moduli=()):
    """Tables covering ``need`` with ``moduli``, honouring --sieve-limit and the cache."""
    moduli = sorted({int(d) for d in (*moduli, *cfg.moduli)} - {1})
    limit = max(need, 1)
    if cfg.sieve_limit is not None:
        if cfg.sieve_limit < need:
            raise CapacityError(f"this run needs primes up to {need}; --sieve-limit is {cfg.sieve_limit}")
        limit = cfg.sieve_limit
    path = cfg.cache_path
    if path and os.path.exists(path):
        try:
            cached = load_tables(path)
        except CacheFormatError as exc:
            log.warning("ignoring cache: %s", exc)
        else:
            if cached.limit >= limit and set(moduli) <= set(cached.moduli):
                return cached
            moduli = sorted(set(moduli) | set(cached.moduli))
            limit = max(limit, cached.limit)
    tables = build_tables(limit, moduli)
    if path:
        save_tables(tables, path)
    return tables


def _rsa_need(x, r):
    return math.isqrt(x * r.num // r.den)


def cmd_count(args, cfg, out):
    r, c1, c2 = args.r, args.c1, args.c2
    tables = get_tables(cfg, _rsa_need(args.x, r), (c1.d, c2.d))
    rep = count_report(tables, args.x, r, c1, c2, ns=args.n, spec=cfg.quadrature)
    row = {"x": rep.x, "r": str(r), "c1": str(c1), "c2": str(c2), "exact": rep.exact, "fr_value": rep.fr_value}
    columns = list(row)
    for n in args.n:
        row[f"series_n{n}"] = rep.series_values.get(n)
        columns.append(f"series_n{n}")
    for label in ["fr", *[f"series_n{n}" for n in args.n]]:
        row[f"dev_{label}"] = rep.deviations.get(label)
        columns.append(f"dev_{label}")
    emit(cfg, "count", columns, [row], out)
    return EXIT_OK


def cmd_table1(args, cfg, out):
    if args.long:
        rows = [
            {"k": k, "j": j, "numerator": c.numerator, "denominator": c.denominator}
            for k in range(1, args.kmax + 1)
            for j, c in enumerate(ak_polynomial(k).coeffs, start=1)
        ]
        emit(cfg, "table1", ["k", "j", "numerator", "denominator"], rows, out)
    else:
        emit(cfg, "table1", ["k", "a_k"], [{"k": k, "a_k": text} for k, text in table1(args.kmax)], out)
    return EXIT_OK


def cmd_coeffs(args, cfg, out):
    poly = ak_polynomial(args.k)
    rows = [
        {"k": args.k, "j": j, "power": 2 * j - 1, "numerator": c.numerator, "denominator": c.denominator}
        for j, c in enumerate(poly.coeffs, start=1)
    ]
    emit(cfg, "coeffs", ["k", "j", "power", "numerator", "denominator"], rows, out)
    return EXIT_OK


def cmd_fr(args, cfg, out):
    x, r, spec = args.x, args.r, cfg.quadrature
    row = {
        "x": x,
        "r": str(r),
        "fr": f_r(x, r, spec),
        "gr": g_r(x, r, spec),
        "gr_signed": g_r(x, r, spec, signed=True),
        "gr_signed_at_2r": g_r(2 * r.value, r, spec, signed=True),
        "fr_derivative": gr_derivative(x, r),
    }
    emit(cfg, "fr", list(row), [row], out)
    return EXIT_OK


def cmd_bias(args, cfg, out):
    x, r = args.x, args.r
    c1, c2 = args.c1 or ClassConstraint(3, 4), args.c2 or ClassConstraint(3, 4)
    need = x // 3
    if r is not None:
        need = max(need, _rsa_need(x, r))
    tables = get_tables(cfg, need, (4, c1.d, c2.d))
    row = {"x": x, "dummit_ratio": dummit_ratio(tables, x), "beta_reference": BIAS_CONSTANTS.expected_ratio(x)}
    columns = list(row)
    if r is not None:
        row.update({"r": str(r), "c1": str(c1), "c2": str(c2), "rsa_bias_ratio": rsa_bias_ratio(tables, x, r, c1, c2)})
        columns += ["r", "c1", "c2", "rsa_bias_ratio"]
    emit(cfg, "bias", columns, [row], out)
    return EXIT_OK


def cmd_race(args, cfg, out):
    d, r, grid = args.d, args.r, args.grid
    first = (ClassConstraint(args.pair1[0] % d, d), ClassConstraint(args.pair1[1] % d, d))
    second = (ClassConstraint(args.pair2[0] % d, d), ClassConstraint(args.pair2[1] % d, d))
    tables = get_tables(cfg, _rsa_need(max(grid), r), (d,))
    records = race(tables, r, first, second, grid, threads=cfg.threads)
    rows = [
        {
            "x": rec.x,
            "count_pair1": rec.counts[0],
            "count_pair2": rec.counts[1],
            "lead": rec.lead,
            "lead_fraction": round(rec.cumulative_lead_fraction, 6),
        }
        for rec in records
    ]
    emit(cfg, "race", ["x", "count_pair1", "count_pair2", "lead", "lead_fraction"], rows, out)
    return EXIT_OK


def _suite_identities(args, cfg):
    tables = get_tables(cfg, math.isqrt(args.x), (4,))
    rows = []
    for c1 in (ALL_PRIMES, ClassConstraint(3, 4)):
        for res in verify_summation_identities(tables, args.x, args.r, c1, cfg.quadrature):
            rows.append(_residual_row("identities", res, f"S1={c1}"))
    return rows


def _suite_derivative(args, cfg):
    r = args.r
    rows = []
    # strictly above 4r so the difference stencil avoids the kink of clipped Li
    for factor in (5, 10, 100, 10**4, 10**6):
        x = factor * r.value
        rows.append(_residual_row("derivative", check_derivative(x, r), f"x={x!r}"))
    approx_e2 = RatioParam.coerce(Fraction(math.exp(2)).limit_denominator(10**6))
    spot = gr_derivative(math.exp(4), approx_e2)
    rows.append({
        "suite": "derivative", "identity": "gr_derivative_spot", "case": f"x=e^4,r={approx_e2}",
        "lhs": spot, "rhs": math.log(3) / 4, "rel_residual": abs(spot - math.log(3) / 4),
        "ok": abs(spot - math.log(3) / 4) <= 1e-3,
    })
    return rows


def _suite_coefficients(args, cfg):
    rows = []
    c = nb_coefficients(transport_weights(12))
    bad = [k for k in range(1, 11) if c[k] != ak_polynomial(k).as_poly()]
    rows.append({"suite": "coefficients", "identity": "transport", "case": "k<=10", "lhs": len(bad), "rhs": 0,
                 "rel_residual": float(len(bad)), "ok": not bad})
    mismatches = 0
    for j in range(1, 31):
        m = mu(j)
        f = mu_formula(j)
        prime = _is_small_prime(2 * j - 1)
        mismatches += (m > 4 * j - 2) or ((m == 4 * j - 2) != prime) or (f is not None and f != m)
    rows.append({"suite": "coefficients", "identity": "mu", "case": "j<=30", "lhs": mismatches, "rhs": 0,
                 "rel_residual": float(mismatches), "ok": mismatches == 0})
    return rows


def _is_small_prime(n):
    return n > 1 and all(n % p for p in range(2, math.isqrt(n) + 1))


def _residual_row(suite, res, case):
    return {
        "suite": suite, "identity": res.identity_label, "case": case, "lhs": res.lhs, "rhs": res.rhs,
        "rel_residual": res.rel_residual, "ok": res.rel_residual <= RESIDUAL_THRESHOLD,
    }


SUITES = {
    "identities": [_suite_identities],
    "derivative": [_suite_derivative],
    "coefficients": [_suite_coefficients],
}
SUITES["all"] = SUITES["identities"] + SUITES["derivative"] + SUITES["coefficients"]


def cmd_verify(args, cfg, out):
    rows = []
    for suite in SUITES[args.suite]:
        rows.extend(suite(args, cfg))
    emit(cfg, "verify", ["suite", "identity", "case", "lhs", "rhs", "rel_residual", "ok"], rows, out)
    failed = [row for row in rows if not row["ok"]]
    for row in failed:
        log.error("verification failed: %s %s (%s) residual %.3g", row["suite"], row["identity"], row["case"], row["rel_residual"])
    return EXIT_VERIFY if failed else EXIT_OK


def _common(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--sieve-limit", type=_int_value, default=None)
    p.add_argument("--threads", type=_threads, default=1, help="worker threads, or 'auto'")
    p.add_argument("--cache", default=None, help="binary table cache file (RSAC_CACHE overrides)")
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _common(common)
    parser = argparse.ArgumentParser(prog="rsaint", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="exact C_r(x) / D_r(x) against F_r and the series")
    p.add_argument("--x", type=_int_value, required=True)
    p.add_argument("--r", type=_ratio, required=True)
    p.add_argument("--c1", type=_klass, default=ALL_PRIMES)
    p.add_argument("--c2", type=_klass, default=ALL_PRIMES)
    p.add_argument("--n", type=_orders, default=[2, 4, 6], help="series orders, comma separated")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("table1", parents=[common], help="a_k(r) for k = 1..kmax")
    p.add_argument("--kmax", type=int, default=10)
    p.add_argument("--long", action="store_true", help="one row per (k, j) coefficient")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("coeffs", parents=[common], help="exact coefficients of a_k(r)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("fr", parents=[common], help="F_r(x), G_r(x) and F_r'(x)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--r", type=_ratio, required=True)
    p.set_defaults(func=cmd_fr)

    p = sub.add_parser("bias", parents=[common], help="r(x) and, with --r, the RSA bias ratio")
    p.add_argument("--x", type=_int_value, required=True)
    p.add_argument("--r", type=_ratio, default=None)
    p.add_argument("--c1", type=_klass, default=None)
    p.add_argument("--c2", type=_klass, default=None)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("race", parents=[common], help="race two class pairs of RSA-integers")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=_ratio, required=True)
    p.add_argument("--grid", type=_grid, required=True, help="lo:hi:points, geometric")
    p.add_argument("--pair1", type=_residues, default=(3, 3), help="a1:a2 residues of the first pair")
    p.add_argument("--pair2", type=_residues, default=(1, 1), help="a1:a2 residues of the second pair")
    p.set_defaults(func=cmd_race)

    p = sub.add_parser("verify", parents=[common], help="run identity / derivative / coefficient checks")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--x", type=_int_value, default=10**4)
    p.add_argument("--r", type=_ratio, default=RatioParam(2))
    p.set_defaults(func=cmd_verify)
    return parser


def _residues(text):
    try:
        a1, a2 = text.split(":")
        return int(a1), int(a2)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a1:a2, got {text!r}") from None


def main(argv=None, out=None):
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="rsaint: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help/--version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = RunConfig(
            sieve_limit=args.sieve_limit,
            quadrature=QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol),
            threads=args.threads,
            output_format=args.format,
            cache_path=os.environ.get("RSAC_CACHE") or args.cache,
        )
    except (ValueError, RsaintError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    try:
        return args.func(args, cfg, out)
    except CapacityError as exc:
        log.error("%s", exc)
        return EXIT_CAPACITY
    except ConvergenceError as exc:
        log.error("%s (best estimate %r, error bound %.3g)", exc, exc.estimate, exc.error)
        return EXIT_CONVERGENCE
    except (RsaintError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
