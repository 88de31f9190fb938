import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rsaint import _kernels_py
from rsaint._backend import BACKEND, kernels
from rsaint.sieve import build_tables

try:
    from rsaint import _kernels as compiled
except ImportError:  # pragma: no cover - exercised only without a compiler
    compiled = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
if compiled is not None:
    BACKENDS.append(pytest.param(compiled, id="cython"))

TABLES = build_tables(20_000, {3, 4, 10})


def test_backend_selected():
    assert BACKEND in ("cython", "python")
    assert kernels.BLOCK_BITS == _kernels_py.BLOCK_BITS


@pytest.mark.parametrize("k", BACKENDS)
@settings(max_examples=200, deadline=None)
@given(y=st.integers(0, 20_000), d=st.sampled_from([1, 3, 4, 10]), data=st.data())
def test_rank_matches_searchsorted(k, y, d, data):
    a = 0 if d == 1 else data.draw(st.integers(0, d - 1))
    primes = TABLES.primes
    sel = primes if d == 1 else primes[primes % d == a]
    expected = int(np.searchsorted(sel, y, side="right"))
    assert k.rank(TABLES.words, TABLES.base_for(d, a), y, d, a) == expected


@pytest.mark.parametrize("k", BACKENDS)
def test_rank_many(k):
    ys = np.array([0, 1, 2, 3, 511, 512, 513, 19_999, 20_000])
    got = np.asarray(k.rank_many(TABLES.words, TABLES.block_base, ys, 1, 0))
    assert list(got) == [int(np.searchsorted(TABLES.primes, y, side="right")) for y in ys]


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
@pytest.mark.parametrize("x", [0, 6, 100, 9_999, 30_000, 100_000])
@pytest.mark.parametrize("num,den", [(3, 2), (2, 1), (10, 1), (101, 100)])
@pytest.mark.parametrize("c", [(1, 0, 1, 0), (4, 3, 4, 3), (10, 1, 10, 9)])
def test_backends_agree_on_counts(x, num, den, c):
    d1, a1, d2, a2 = c
    args = (TABLES.primes, TABLES.words, TABLES.base_for(d2, a2))
    if x * num // den <= 20_000**2:
        assert compiled.pair_count_direct(TABLES.primes, x, num, den, *c) == _kernels_py.pair_count_direct(
            TABLES.primes, x, num, den, *c
        )
        assert compiled.decomposed_count(*args, x, num, den, *c) == _kernels_py.decomposed_count(
            *args, x, num, den, *c
        )
    if x <= 40_000:
        assert compiled.semiprime_sum(*args, x, d1, a1, d2, a2, 2) == _kernels_py.semiprime_sum(
            *args, x, d1, a1, d2, a2, 2
        )
