"""Rigorous enclosures of log n!.

Two evaluation routes, both with directed rounding throughout:

* exact summation of log 2 + ... + log n for small n (or when extreme
  precision is requested),
* the Stirling series with its enveloping remainder for large n: the
  error after m terms has the magnitude and sign of the first omitted
  term, so truncation brackets the exact value.

A batch variant produces float64 bound arrays for bulk sweeps; the
per-step bounds are 53-bit MPFR directed roundings, hence exact as
float64 values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from gmpy2 import mpfr, mpq

from .enclosure import Enclosure, ctx_down, ctx_up, log_enclosure, pi_enclosure

__all__ = [
    "LogFactorialBracket",
    "batch_log_enclosures",
    "lemma_bracket_violations",
    "log_factorial",
    "log_factorial_enclosure",
]

REL_WIDTH_TARGET = 2.0**-40

# Below this the plain sum is both cheap and tightest.
_SUM_CUTOFF = 64


@dataclass(frozen=True)
class LogFactorialBracket:
    """Certified bracket lower <= log n! <= upper with relative width <= 2^-40."""

    n: int
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.lower <= self.upper:
            raise ValueError("inverted bracket")
        if self.upper - self.lower > REL_WIDTH_TARGET * max(1.0, abs(self.lower)):
            raise ValueError(f"bracket for log {self.n}! is wider than 2^-40 relative")


@lru_cache(maxsize=None)
def _bernoulli_even(j: int) -> Fraction:
    """Exact Bernoulli number B_{2j} via the defining recurrence."""
    top = 2 * j
    b: List[Fraction] = [Fraction(1)]
    for m in range(1, top + 1):
        acc = Fraction(0)
        for i in range(m):
            acc += math.comb(m + 1, i) * b[i]
        b.append(-acc / (m + 1))
    return b[top]


def _sum_enclosure(n: int, bits: int) -> Enclosure:
    cd, cu = ctx_down(bits), ctx_up(bits)
    lo = mpfr(0)
    hi = mpfr(0)
    for j in range(2, n + 1):
        lo = cd.add(lo, cd.log(j))
        hi = cu.add(hi, cu.log(j))
    return Enclosure(lo, hi, bits)


def _stirling_enclosure(n: int, bits: int) -> Enclosure:
    """Stirling-series enclosure; valid for any n >= 1, tight for large n.

    log n! = (n + 1/2) log n - n + log(2 pi)/2 + sum of exact rational
    terms B_{2j} / (2j (2j-1) n^{2j-1}) plus a remainder bracketed by the
    first omitted term (same sign, no larger magnitude).
    """
    target = mpq(1, 1 << (bits + 2))
    series = mpq(0)
    j = 0
    npow = mpq(n)  # n^(2j+1) as we go
    while True:
        j += 1
        term = mpq(_bernoulli_even(j)) / (2 * j * (2 * j - 1) * npow)
        bound = abs(term)
        if bound <= target or 2 * j + 1 >= n:
            remainder_lo = min(term, mpq(0))
            remainder_hi = max(term, mpq(0))
            break
        series += term
        npow *= n * n
    tail = Enclosure.from_rational_bounds(remainder_lo, remainder_hi, bits)
    log_n = log_enclosure(n, bits)
    two_pi_log = (pi_enclosure(bits) * 2).log()
    main = log_n * Fraction(2 * n + 1, 2) - n + two_pi_log * Fraction(1, 2)
    return main + Enclosure.from_rational(series, bits) + tail


def log_factorial_enclosure(n: int, bits: int) -> Enclosure:
    """Enclosure of log n! at the requested working precision."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return Enclosure.exact_zero(bits)
    # The smallest Stirling term is about exp(-2 pi n); past that only the
    # plain sum can narrow the bracket further.
    if n < _SUM_CUTOFF or bits + 4 > 9 * n:
        return _sum_enclosure(n, bits)
    return _stirling_enclosure(n, bits)


def log_factorial(n: int) -> LogFactorialBracket:
    """Bracket of log n! with relative width at most 2^-40.

    Escalates the working precision until the target width is met, then
    rounds the bounds outward to float64.
    """
    if n < 1:
        raise ValueError("n must be positive")
    bits = 64
    while True:
        enc = log_factorial_enclosure(n, bits)
        lo53 = ctx_down(53).add(enc.lower, mpfr(0))
        hi53 = ctx_up(53).add(enc.upper, mpfr(0))
        width = float(hi53) - float(lo53)
        if width <= REL_WIDTH_TARGET * max(1.0, abs(float(lo53))):
            return LogFactorialBracket(n=n, lower=float(lo53), upper=float(hi53))
        bits *= 2
        if bits > 1 << 20:
            raise ArithmeticError(f"log {n}! bracket failed to converge")


def batch_log_enclosures(limit: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Directed float64 bounds of log n and log n! for all n in [1, limit].

    Returns (lg_lo, lg_hi, lf_lo, lf_hi), each indexed by n; index 0 is
    unused.  Running sums carry 53-bit directed rounding at every step, so
    lf_lo[n] <= log n! <= lf_hi[n] holds exactly.  Width grows with n but
    stays orders of magnitude below the slack of every check that
    consumes these arrays.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    cd, cu = ctx_down(53), ctx_up(53)
    lg_lo = np.zeros(limit + 1)
    lg_hi = np.zeros(limit + 1)
    lf_lo = np.zeros(limit + 1)
    lf_hi = np.zeros(limit + 1)
    slo = mpfr(0)
    shi = mpfr(0)
    for j in range(2, limit + 1):
        llo = cd.log(j)
        lhi = cu.log(j)
        slo = cd.add(slo, llo)
        shi = cu.add(shi, lhi)
        lg_lo[j] = float(llo)
        lg_hi[j] = float(lhi)
        lf_lo[j] = float(slo)
        lf_hi[j] = float(shi)
    return lg_lo, lg_hi, lf_lo, lf_hi


def _nudge_up(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, np.inf)


def _nudge_down(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, -np.inf)


def lemma_bracket_violations(limit: int) -> List[int]:
    """All n in [1, limit] where the certified check of

        n log n - n + 1  <=  log n!  <=  n log n - n + 1 + log n

    fails.  Expected empty: the bracket is a theorem.  IEEE ops are
    correctly rounded, so one outward nextafter per operation keeps the
    vectorized bounds rigorous; n = 1 is checked exactly (all zeros).
    """
    lg_lo, lg_hi, lf_lo, lf_hi = batch_log_enclosures(limit)
    bad: List[int] = []
    if not (lf_lo[1] == 0.0 == lf_hi[1]):  # log 1! is exactly 0
        bad.append(1)
    if limit < 2:
        return bad
    ns = np.arange(2, limit + 1, dtype=np.float64)
    # upper bound of the floor side: n log n - n + 1
    floor_hi = _nudge_up(_nudge_up(ns * lg_hi[2:]) - (ns - 1.0))
    # lower bound of the ceiling side: n log n - n + 1 + log n
    ceil_lo = _nudge_down(_nudge_down(_nudge_down(ns * lg_lo[2:]) - (ns - 1.0)) + lg_lo[2:])
    ok = (floor_hi <= lf_lo[2:]) & (lf_hi[2:] <= ceil_lo)
    for idx in np.nonzero(~ok)[0]:
        bad.append(int(idx) + 2)
    return bad
