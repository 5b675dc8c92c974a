"""Exact integer arithmetic: sieves, factorization, factorial valuations,
and exact comparison of factorials against rational powers.

Everything in this module is integer-exact.  Floating point appears only
inside the prefilter of exact_compare_factorial_power, and there only to
decide whether materializing big integers can be skipped; the prefilter
never decides a close call on its own.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

__all__ = [
    "Cmp",
    "ExponentK",
    "Factorization",
    "SpfSieve",
    "build_spf_sieve",
    "factorize",
    "is_prime",
    "legendre_valuation",
    "exact_compare_factorial_power",
]


class Cmp(enum.IntEnum):
    """Three-way ordering."""

    LT = -1
    EQ = 0
    GT = 1


# Deterministic Miller-Rabin witness set: correct for all n < 3.317e24,
# which covers the full 64-bit range this module promises to factor.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Deterministic primality test for n below 3.317e24 (covers 64 bits)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n as (prime, exponent) pairs, primes increasing.

    The constructor re-multiplies the factors, so a Factorization that
    exists is internally consistent; primality of the listed primes is
    guaranteed by the construction paths in factorize().
    """

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        prod = 1
        prev = 1
        for p, a in self.factors:
            if p <= prev or a < 1:
                raise ValueError("factors must be (increasing prime, exponent >= 1)")
            prev = p
            prod *= p**a
        if prod != self.n:
            raise ValueError(f"factors do not multiply back to {self.n}")

    @property
    def largest_prime(self) -> int:
        """Largest prime factor, taken to be 1 for n = 1."""
        return self.factors[-1][0] if self.factors else 1


@dataclass(frozen=True)
class SpfSieve:
    """Smallest-prime-factor table for 2 <= n <= limit.

    spf[n] is the smallest prime dividing n; spf[n] == n exactly when n is
    prime.  Entries 0 and 1 are unused sentinels.  Immutable after build
    and safe to share between threads.
    """

    limit: int
    spf: np.ndarray

    def smallest_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range [2, {self.limit}]")
        return int(self.spf[n])

    def is_prime(self, n: int) -> bool:
        if not 2 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range [2, {self.limit}]")
        return int(self.spf[n]) == n

    def primes(self) -> np.ndarray:
        """All primes up to limit, increasing."""
        ns = np.arange(2, self.limit + 1, dtype=self.spf.dtype)
        return ns[self.spf[2:] == ns]


def build_spf_sieve(limit: int) -> SpfSieve:
    """Build the smallest-prime-factor sieve on [2, limit].

    Deterministic; uint32 storage for limit < 2^32.  Raises ValueError for
    limit < 2.
    """
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    dtype = np.uint32 if limit < 2**32 else np.uint64
    spf = np.zeros(limit + 1, dtype=dtype)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    # remaining zeros at indices >= 2 are primes
    ns = np.arange(2, limit + 1, dtype=dtype)
    mask = spf[2:] == 0
    spf[2:][mask] = ns[mask]
    return SpfSieve(limit=limit, spf=spf)


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n.

    Brent's cycle variant of Pollard rho with a fixed parameter schedule,
    so factorization results are reproducible run to run.  The caller
    verifies the result; a bad split cannot survive.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"failed to split {n}")  # not reachable for 64-bit n


def _factor_general(n: int, out: dict) -> None:
    """Split n (no factors below 10^4) into primes, accumulating into out."""
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_general(d, out)
    _factor_general(n // d, out)


_TRIAL_LIMIT = 10_000


def factorize(n: int, sieve: Optional[SpfSieve] = None) -> Factorization:
    """Factor a positive integer into (prime, exponent) pairs.

    Uses smallest-prime-factor chaining when a sieve covering n is given,
    otherwise trial division by small primes followed by deterministic
    primality testing and Brent-rho splitting.  Exact for all n up to
    2^64 (and in practice well beyond, up to the 3.3e24 reach of the
    witness set).  The result is verified by re-multiplication on
    construction.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return Factorization(1, ())
    if sieve is not None and n <= sieve.limit:
        spf = sieve.spf
        factors = []
        m = n
        while m > 1:
            p = int(spf[m])
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            factors.append((p, a))
        factors.sort()
        return Factorization(n, tuple(factors))
    counts: dict = {}
    m = n
    d = 2
    while d <= _TRIAL_LIMIT and d * d <= m:
        while m % d == 0:
            counts[d] = counts.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        if m <= _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(m):
            # below the trial bound squared any survivor is prime
            counts[m] = counts.get(m, 0) + 1
        else:
            _factor_general(m, counts)
    return Factorization(n, tuple(sorted(counts.items())))


def _legendre_unchecked(p: int, m: int) -> int:
    v = 0
    pk = p
    while pk <= m:
        v += m // pk
        pk *= p
    return v


def legendre_valuation(p: int, m: int) -> int:
    """Exponent of the prime p in m!, i.e. sum of floor(m / p^i) over i >= 1.

    Raises ValueError when p is not prime or m is negative.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    return _legendre_unchecked(p, m)


@dataclass(frozen=True)
class ExponentK:
    """Exact rational exponent k = p/q > 1 in lowest terms."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1 or self.p <= self.q:
            raise ValueError(f"need p > q >= 1, got {self.p}/{self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, value) -> "ExponentK":
        """Build from an int, Fraction, float-free decimal string, or 'p/q'."""
        if isinstance(value, ExponentK):
            return value
        if isinstance(value, int):
            frac = Fraction(value)
        elif isinstance(value, Fraction):
            frac = value
        elif isinstance(value, str):
            if "/" in value:
                num, den = value.split("/", 1)
                frac = Fraction(int(num), int(den))
            else:
                frac = Fraction(value)  # exact decimal parse, e.g. '1.5'
        else:
            raise TypeError(f"cannot build exponent from {value!r}")
        return cls(frac.numerator, frac.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


_LOG2 = math.log(2)


def _log2_factorial_estimate(s: int) -> float:
    """log2(s!) via lgamma; accurate to ~1e-13 relative."""
    return math.lgamma(s + 1) / _LOG2


def exact_compare_factorial_power(s: int, n: int, k: ExponentK) -> Cmp:
    """Exact three-way ordering of s! versus n^k for rational k = p/q.

    Compares (s!)^q against n^p.  A bit-length prefilter with a generous
    error margin decides the lopsided cases; big integers are materialized
    only when the two sides are within a couple of bits of each other.
    """
    if s < 1 or n < 1:
        raise ValueError("s and n must be positive")
    if s <= 1:
        return Cmp.EQ if n == 1 else Cmp.LT
    if n == 1:
        return Cmp.GT  # s >= 2 so s! >= 2 > 1
    lhs_bits = k.q * _log2_factorial_estimate(s)
    rhs_bits = k.p * math.log2(n)
    slack = 1e-9 * (abs(lhs_bits) + abs(rhs_bits)) + 2.0
    if lhs_bits > rhs_bits + slack:
        return Cmp.GT
    if lhs_bits < rhs_bits - slack:
        return Cmp.LT
    lhs = math.factorial(s) ** k.q
    rhs = n**k.p
    if lhs < rhs:
        return Cmp.LT
    if lhs > rhs:
        return Cmp.GT
    return Cmp.EQ
