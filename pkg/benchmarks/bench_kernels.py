"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--x 1e6] [--repeat 3]

Both backends get identical inputs; results are checked for equality before
timings are printed.
"""

import argparse
import timeit

import numpy as np

from rsaint import _kernels_py as pure
from rsaint.sieve import build_tables

try:
    from rsaint import _kernels as compiled
except ImportError:
    compiled = None


def cases(tables, x):
    primes, words = tables.primes, tables.words
    base, base4 = tables.block_base, tables.base_for(4, 3)
    ys = np.linspace(2, tables.limit, 2000).astype(np.int64)
    return {
        "rank x2000": lambda k: k.rank_many(words, base, ys, 1, 0),
        "rank mod 4 x200": lambda k: k.rank_many(words, base4, ys[:200], 4, 3),
        "pair_count_direct r=2": lambda k: k.pair_count_direct(primes, x, 2, 1, 1, 0, 1, 0),
        "decomposed_count r=2": lambda k: k.decomposed_count(primes, words, base, x, 2, 1, 1, 0, 1, 0),
        "decomposed_count 3:4 r=3/2": lambda k: k.decomposed_count(primes, words, base4, x, 3, 2, 4, 3, 4, 3),
        "semiprime_sum odd": lambda k: k.semiprime_sum(primes, words, base, x, 1, 0, 1, 0, 3),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=float, default=1e6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    x = int(args.x)
    tables = build_tables(x // 3 + 1, {4})
    backends = [("python", pure)] + ([("cython", compiled)] if compiled else [])
    if compiled is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"x = {x}, sieve limit {tables.limit}")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name, _ in backends) + ("     speedup" if compiled else ""))
    for label, fn in cases(tables, x).items():
        results = [fn(k) for _, k in backends]
        assert all(np.array_equal(results[0], res) for res in results[1:]), label
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        line = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if compiled:
            line += f"{times[0] / times[1]:>11.0f}x"
        print(line)


if __name__ == "__main__":
    main()
