"""Pure-Python kernels. Same signatures and results as the compiled ``_kernels``.

Bitmap layout: bit ``i`` of ``words[w]`` is set iff ``64*w + i`` is prime.
``base[b]`` counts the marked integers below ``b * BLOCK_BITS`` (restricted to
one residue class when ``d > 1``).
"""

BLOCK_WORDS = 8
BLOCK_BITS = 64 * BLOCK_WORDS

_MASK64 = (1 << 64) - 1


def rank(words, base, y, d, a):
    """Number of primes ``<= y``, restricted to ``p % d == a`` when ``d > 1``."""
    if y < 0:
        return 0
    b = y // BLOCK_BITS
    count = int(base[b])
    first = b * BLOCK_WORDS
    last = y >> 6
    for i in range(first, last + 1):
        w = int(words[i])
        if i == last:
            w &= _MASK64 >> (63 - (y & 63))
        if d == 1:
            count += w.bit_count()
            continue
        while w:
            low = w & -w
            n = (i << 6) + low.bit_length() - 1
            if n % d == a:
                count += 1
            w ^= low
    return count


def rank_many(words, base, ys, d, a):
    return [rank(words, base, int(y), d, a) for y in ys]


def pair_count_direct(primes, x, num, den, d1, a1, d2, a2):
    """Filtered double loop over pairs p < q <= r*p with p*q <= x."""
    total = 0
    n = len(primes)
    for i in range(n):
        p = int(primes[i])
        if p * p >= x:
            break
        if d1 > 1 and p % d1 != a1:
            continue
        for j in range(i + 1, n):
            q = int(primes[j])
            if p * q > x or q * den > num * p:
                break
            if d2 > 1 and q % d2 != a2:
                continue
            total += 1
    return total


def decomposed_count(primes, words, base2, x, num, den, d1, a1, d2, a2):
    """Sum over p of pi_S2(min(r*p, x/p)) - pi_S2(p), split at p = sqrt(x/r)."""
    below = 0  # sum of pi_S2(p), p <= sqrt(x)
    short = 0  # sum of pi_S2(r*p), p <= sqrt(x/r)
    long_ = 0  # sum of pi_S2(x/p), sqrt(x/r) < p <= sqrt(x)
    for p in primes:
        p = int(p)
        if p * p > x:
            break
        if d1 > 1 and p % d1 != a1:
            continue
        below += rank(words, base2, p, d2, a2)
        if p * p * num <= x * den:
            short += rank(words, base2, (num * p) // den, d2, a2)
        else:
            long_ += rank(words, base2, x // p, d2, a2)
    return short + long_ - below


def semiprime_sum(primes, words, base2, x, d1, a1, d2, a2, pmin):
    """Sum over p <= sqrt(x) in S1 of pi_S2(x/p) - pi_S2(p)."""
    total = 0
    for p in primes:
        p = int(p)
        if p * p > x:
            break
        if p < pmin or (d1 > 1 and p % d1 != a1):
            continue
        total += rank(words, base2, x // p, d2, a2) - rank(words, base2, p, d2, a2)
    return total
