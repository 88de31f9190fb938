"""Immutable prime tables: a bit-packed segmented sieve with block rank counts.

Queries for pi(y) and pi(y; d, a) cost one table lookup plus a scan of at most
one block (``BLOCK_BITS`` integers) of the bitmap.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import CacheFormatError, CapacityError, ConfigurationError, DomainError, OutOfRangeError

BLOCK_WORDS = kernels.BLOCK_WORDS
BLOCK_BITS = kernels.BLOCK_BITS
DEFAULT_SEGMENT = 1 << 20
DEFAULT_MEMORY_BUDGET = 2 << 30

CACHE_MAGIC = b"RSAC"
CACHE_VERSION = 1


@dataclass(frozen=True, eq=False)
class PrimeTables:
    limit: int
    moduli: tuple
    primes: np.ndarray = field(repr=False)
    words: np.ndarray = field(repr=False)
    block_base: np.ndarray = field(repr=False)
    class_base: dict = field(repr=False)

    def __len__(self):
        return len(self.primes)

    def pi(self, y):
        return prime_count(self, y)

    def pi_ap(self, y, d, a):
        return prime_count_ap(self, y, d, a)

    def base_for(self, d, a):
        """Block base counts for class ``a mod d`` (``d == 1`` means all primes)."""
        if d == 1:
            return self.block_base
        if d not in self.class_base:
            raise ConfigurationError(f"modulus {d} was not registered (have {sorted(self.class_base)})")
        if not 0 <= a < d:
            raise DomainError(f"residue {a} not in [0, {d})")
        return self.class_base[d][a]


def _small_primes(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark).astype(np.int64)


def estimate_memory(limit, moduli=()):
    """Rough byte count of the tables built for ``limit``."""
    nbits = (limit // BLOCK_BITS + 1) * BLOCK_BITS
    nblocks = nbits // BLOCK_BITS
    n_primes = 1.3 * limit / math.log(limit) if limit > 10 else 8
    per_block = 8 * (1 + sum(moduli))
    return nbits // 8 + nblocks * per_block + 8 * int(n_primes)


def build_tables(limit, moduli=(), segment_size=DEFAULT_SEGMENT, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Sieve ``[0, limit]`` and build rank tables for pi and each modulus in ``moduli``."""
    limit = int(limit)
    if limit < 1:
        raise DomainError("limit must be >= 1")
    moduli = tuple(sorted({int(d) for d in moduli} - {1}))
    if any(d < 1 for d in moduli):
        raise DomainError("moduli must be >= 1")
    if estimate_memory(limit, moduli) > memory_budget:
        raise CapacityError(
            f"tables for limit={limit} need ~{estimate_memory(limit, moduli)} bytes, budget is {memory_budget}"
        )
    segment_size = max(BLOCK_BITS, -(-int(segment_size) // BLOCK_BITS) * BLOCK_BITS)

    nblocks = limit // BLOCK_BITS + 1
    nbits = nblocks * BLOCK_BITS
    words = np.zeros(nbits // 64, dtype=np.uint64)
    block_counts = np.zeros(nblocks, dtype=np.int64)
    class_counts = {d: np.zeros((nblocks, d), dtype=np.int64) for d in moduli}
    base_primes = _small_primes(math.isqrt(limit))
    chunks = []

    for lo in range(0, nbits, segment_size):
        hi = min(lo + segment_size, nbits)
        mask = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            mask[: min(2, hi)] = False
        if hi > limit + 1:
            mask[max(limit + 1 - lo, 0) :] = False
        for p in base_primes:
            p = int(p)
            start = max(p * p, -(-lo // p) * p)
            if start >= hi:
                continue
            mask[start - lo :: p] = False
        words[lo // 64 : hi // 64] = np.packbits(mask, bitorder="little").view("<u8")
        b0 = lo // BLOCK_BITS
        nb = (hi - lo) // BLOCK_BITS
        block_counts[b0 : b0 + nb] = mask.reshape(nb, BLOCK_BITS).sum(axis=1)
        seg_primes = lo + np.flatnonzero(mask).astype(np.int64)
        chunks.append(seg_primes)
        for d, counts in class_counts.items():
            idx = (seg_primes // BLOCK_BITS - b0) * d + seg_primes % d
            counts[b0 : b0 + nb] += np.bincount(idx, minlength=nb * d).reshape(nb, d)

    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    block_base = np.concatenate(([0], np.cumsum(block_counts))).astype(np.int64)
    class_base = {}
    for d, counts in class_counts.items():
        cum = np.vstack([np.zeros((1, d), dtype=np.int64), np.cumsum(counts, axis=0)])
        class_base[d] = np.ascontiguousarray(cum.T)
    return _freeze(limit, moduli, primes, words, block_base, class_base)


def _freeze(limit, moduli, primes, words, block_base, class_base):
    for arr in (primes, words, block_base, *class_base.values()):
        arr.setflags(write=False)
    return PrimeTables(limit, tuple(moduli), primes, words, block_base, class_base)


def _check_y(tables, y):
    y = int(y)
    if y > tables.limit:
        raise OutOfRangeError(f"query {y} exceeds sieve limit {tables.limit}")
    return y


def prime_count(tables, y):
    """pi(y) for ``y <= tables.limit``; 0 for ``y < 2``."""
    y = _check_y(tables, y)
    return int(kernels.rank(tables.words, tables.block_base, y, 1, 0))


def prime_count_ap(tables, y, d, a):
    """Number of primes ``p <= y`` with ``p % d == a``. ``d`` must be registered."""
    base = tables.base_for(d, a)
    y = _check_y(tables, y)
    return int(kernels.rank(tables.words, base, y, d, a))


def prime_count_many(tables, ys, d=1, a=0):
    """Vectorized ``prime_count_ap`` over an integer array (``d == 1``: plain pi)."""
    ys = np.asarray(ys, dtype=np.int64)
    if ys.size and int(ys.max()) > tables.limit:
        raise OutOfRangeError(f"query {int(ys.max())} exceeds sieve limit {tables.limit}")
    base = tables.base_for(d, a)
    return np.asarray(kernels.rank_many(tables.words, base, ys, d, a), dtype=np.int64)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_partition(tables):
    """True when every registered modulus' class counts sum to pi at each block."""
    for d, base in tables.class_base.items():
        if not np.array_equal(base.sum(axis=0), tables.block_base):
            return False
    return True


def save_tables(tables, path):
    """Write tables to a little-endian binary cache file."""
    moduli = tables.moduli
    header = CACHE_MAGIC + struct.pack("<IQII", CACHE_VERSION, tables.limit, BLOCK_BITS, len(moduli))
    header += struct.pack(f"<{len(moduli)}Q", *moduli)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(struct.pack("<Q", len(tables.words)))
        fh.write(tables.words.astype("<u8").tobytes())
        fh.write(tables.block_base.astype("<u8").tobytes())
        for d in moduli:
            fh.write(tables.class_base[d].astype("<u8").tobytes())


def load_tables(path):
    """Read a cache file written by :func:`save_tables`, re-validating its counts."""
    raw = Path(path).read_bytes()
    if raw[:4] != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic")
    try:
        version, limit, block_bits, nmod = struct.unpack_from("<IQII", raw, 4)
        if version != CACHE_VERSION or block_bits != BLOCK_BITS:
            raise CacheFormatError(f"{path}: unsupported version {version} / block size {block_bits}")
        off = 4 + struct.calcsize("<IQII")
        moduli = struct.unpack_from(f"<{nmod}Q", raw, off)
        off += 8 * nmod
        (nwords,) = struct.unpack_from("<Q", raw, off)
        off += 8
        nblocks = nwords // BLOCK_WORDS
        if nblocks != limit // BLOCK_BITS + 1:
            raise CacheFormatError(f"{path}: word count does not match limit")

        def take(count):
            nonlocal off
            arr = np.frombuffer(raw, dtype="<u8", count=count, offset=off)
            off += 8 * count
            return arr

        words = take(nwords).astype(np.uint64)
        block_base = take(nblocks + 1).astype(np.int64)
        class_base = {d: take(d * (nblocks + 1)).astype(np.int64).reshape(d, nblocks + 1) for d in moduli}
    except struct.error as exc:
        raise CacheFormatError(f"{path}: truncated ({exc})") from None
    except ValueError as exc:
        if isinstance(exc, CacheFormatError):
            raise
        raise CacheFormatError(f"{path}: truncated ({exc})") from None
    if off != len(raw):
        raise CacheFormatError(f"{path}: trailing bytes")

    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    per_block = bits.reshape(nblocks, BLOCK_BITS).sum(axis=1)
    if not np.array_equal(np.concatenate(([0], np.cumsum(per_block))), block_base):
        raise CacheFormatError(f"{path}: block counts disagree with bitmap")
    primes = np.flatnonzero(bits).astype(np.int64)
    if primes.size and int(primes[-1]) > limit:
        raise CacheFormatError(f"{path}: bitmap marks integers beyond limit")
    tables = PrimeTables(limit, tuple(int(d) for d in moduli), primes, words, block_base, class_base)
    if not check_partition(tables):
        raise CacheFormatError(f"{path}: residue-class counts do not sum to pi")
    return _freeze(tables.limit, tables.moduli, primes, words, block_base, class_base)
