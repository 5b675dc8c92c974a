"""The Smarandache (Kempner) function S(n) and the largest prime factor P(n).

S(n) is the least positive j such that n divides j!; P(n) is the largest
prime dividing n, with P(1) = S(1) = 1 by convention.  For prime powers,
S(p^a) is found by binary search on the factorial valuation; for general
n it is the maximum over the prime-power components.  P(n) <= S(n) <= n
always holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arith import (
    Factorization,
    SpfSieve,
    _legendre_unchecked,
    build_spf_sieve,
    factorize,
    is_prime,
)

__all__ = [
    "SmarandacheTable",
    "build_table",
    "largest_prime_factor",
    "smarandache",
    "smarandache_prime_power",
]


def smarandache_prime_power(p: int, a: int) -> int:
    """S(p^a): least m with v_p(m!) >= a.

    Binary search on [p, a*p]; the upper end works because (a*p)! contains
    at least a multiples of p.  The result is always a multiple of p,
    since v_p(m!) only increases at multiples of p.
    """
    if a < 1:
        raise ValueError("exponent must be positive")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    return _smarandache_prime_power_unchecked(p, a)


def _smarandache_prime_power_unchecked(p: int, a: int) -> int:
    lo, hi = p, a * p
    while lo < hi:
        mid = (lo + hi) // 2
        if _legendre_unchecked(p, mid) >= a:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _smarandache_from_factors(f: Factorization) -> int:
    if not f.factors:
        return 1
    return max(_smarandache_prime_power_unchecked(p, a) for p, a in f.factors)


def smarandache(n: int, sieve: Optional[SpfSieve] = None) -> int:
    """S(n): the least j with n | j!.  S(1) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    return _smarandache_from_factors(factorize(n, sieve))


def largest_prime_factor(n: int, sieve: Optional[SpfSieve] = None) -> int:
    """P(n): the largest prime dividing n, with P(1) = 1."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    return factorize(n, sieve).largest_prime


@dataclass(frozen=True)
class SmarandacheTable:
    """Flat per-n tables of S(n) and P(n) on [1, limit].

    32-bit storage whenever limit < 2^32 (S(n) <= n makes that lossless);
    immutable once built and safe to share between threads.
    """

    limit: int
    s_of: np.ndarray
    p_of: np.ndarray

    def s(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        return int(self.s_of[n])

    def p(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range [1, {self.limit}]")
        return int(self.p_of[n])


def build_table(limit: int) -> SmarandacheTable:
    """Tabulate S(n) and P(n) for all n <= limit.

    Sieve-driven: for every prime power p^a <= limit the value S(p^a) is
    folded into all of its multiples with a strided running maximum, and
    P is filled by overwriting multiples in increasing prime order.  No
    per-n trial division happens anywhere.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    dtype = np.uint32 if limit < 2**32 else np.uint64
    s_of = np.ones(limit + 1, dtype=dtype)
    p_of = np.ones(limit + 1, dtype=dtype)
    if limit == 1:
        return SmarandacheTable(limit=limit, s_of=s_of, p_of=p_of)
    sieve = build_spf_sieve(limit)
    primes = sieve.primes()
    for p in primes.tolist():
        p_of[p::p] = p
        pa = p
        a = 1
        while pa <= limit:
            v = _smarandache_prime_power_unchecked(p, a)
            sl = s_of[pa::pa]
            np.maximum(sl, dtype(v), out=sl)
            a += 1
            pa *= p
    return SmarandacheTable(limit=limit, s_of=s_of, p_of=p_of)
