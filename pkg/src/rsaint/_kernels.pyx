# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

import numpy as np

BLOCK_WORDS = 8
BLOCK_BITS = 64 * BLOCK_WORDS

cdef enum:
    C_BLOCK_WORDS = 8
    C_BLOCK_BITS = 512


cdef inline int64_t _rank(const uint64_t[::1] words, const int64_t[::1] base,
                          int64_t y, int64_t d, int64_t a) noexcept nogil:
    cdef int64_t b, count, first, last, i, n
    cdef uint64_t w, low
    if y < 0:
        return 0
    b = y // C_BLOCK_BITS
    count = base[b]
    first = b * C_BLOCK_WORDS
    last = y >> 6
    for i in range(first, last + 1):
        w = words[i]
        if i == last:
            w &= (<uint64_t>0xFFFFFFFFFFFFFFFF) >> (63 - (y & 63))
        if d == 1:
            count += __builtin_popcountll(w)
            continue
        while w:
            n = (i << 6) + __builtin_ctzll(w)
            if n % d == a:
                count += 1
            w &= w - 1
    return count


def rank(const uint64_t[::1] words, const int64_t[::1] base, int64_t y, int64_t d, int64_t a):
    return _rank(words, base, y, d, a)


def rank_many(const uint64_t[::1] words, const int64_t[::1] base, ys, int64_t d, int64_t a):
    cdef const int64_t[::1] yv = np.ascontiguousarray(ys, dtype=np.int64)
    out = np.empty(yv.shape[0], dtype=np.int64)
    cdef int64_t[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(yv.shape[0]):
            ov[i] = _rank(words, base, yv[i], d, a)
    return out


def pair_count_direct(const int64_t[::1] primes, int64_t x, int64_t num, int64_t den,
                      int64_t d1, int64_t a1, int64_t d2, int64_t a2):
    cdef Py_ssize_t i, j, n = primes.shape[0]
    cdef int64_t p, q, total = 0
    with nogil:
        for i in range(n):
            p = primes[i]
            if p * p >= x:
                break
            if d1 > 1 and p % d1 != a1:
                continue
            for j in range(i + 1, n):
                q = primes[j]
                if p * q > x or q * den > num * p:
                    break
                if d2 > 1 and q % d2 != a2:
                    continue
                total += 1
    return total


def decomposed_count(const int64_t[::1] primes, const uint64_t[::1] words,
                     const int64_t[::1] base2, int64_t x, int64_t num, int64_t den,
                     int64_t d1, int64_t a1, int64_t d2, int64_t a2):
    cdef Py_ssize_t i, n = primes.shape[0]
    cdef int64_t p, below = 0, short = 0, long_ = 0
    with nogil:
        for i in range(n):
            p = primes[i]
            if p * p > x:
                break
            if d1 > 1 and p % d1 != a1:
                continue
            below += _rank(words, base2, p, d2, a2)
            if p * p * num <= x * den:
                short += _rank(words, base2, (num * p) // den, d2, a2)
            else:
                long_ += _rank(words, base2, x // p, d2, a2)
    return short + long_ - below


def semiprime_sum(const int64_t[::1] primes, const uint64_t[::1] words,
                  const int64_t[::1] base2, int64_t x, int64_t d1, int64_t a1,
                  int64_t d2, int64_t a2, int64_t pmin):
    cdef Py_ssize_t i, n = primes.shape[0]
    cdef int64_t p, total = 0
    with nogil:
        for i in range(n):
            p = primes[i]
            if p * p > x:
                break
            if p < pmin or (d1 > 1 and p % d1 != a1):
                continue
            total += _rank(words, base2, x // p, d2, a2) - _rank(words, base2, p, d2, a2)
    return total
