"""Certified comparisons of the two lower bounds on |e - m/n|.

For integers m and n > 1 the gap |e - m/n| exceeds both

    1 / (S(n) + 1)!          (the factorial-side bound)
    1 / n^(2 + eps)          (the exponent-side bound, large n)

The first is a theorem for all n > 1, so a certified violation can only
mean a bug; check_sondow_inequality treats it that way.  e itself is
enclosed by the partial sums of sum 1/j! with the rigorous tail bound
2/(J+1)!, never assumed from a stored constant, and the continued
fraction of e is extracted from that enclosure with every partial
quotient certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from gmpy2 import mpq

from .arith import Cmp, ExponentK, exact_compare_factorial_power
from .census import factorial_threshold
from .enclosure import (
    Enclosure,
    IndeterminateComparisonError,
    floor_certified,
    log_enclosure,
    precision_cap,
)
from .logfact import log_factorial_enclosure
from .smarandache import SmarandacheTable, smarandache

__all__ = [
    "APPROX_CSV_HEADER",
    "ApproxRecord",
    "check_sondow_inequality",
    "compare_bounds",
    "count_sondow_not_weaker",
    "e_convergents",
    "e_enclosure",
    "round_e_multiple",
    "stronger_side",
]

APPROX_CSV_HEADER = (
    "m,n,gap_lo,gap_hi,sondow_bound,dirichlet_bound,epsilon_num,epsilon_den,stronger_side"
)


# ---------------------------------------------------------------------------
# e itself


@lru_cache(maxsize=64)
def _e_series_bounds(bits: int) -> Tuple["mpq", "mpq"]:
    """Exact rational bounds on e with hi - lo <= 2^-(bits+1).

    Partial sum of 1/j! up to J (computed as a single rational A/J! by a
    Horner walk) plus the tail bound 2/(J+1)!.
    """
    target_den = 1 << (bits + 1)
    j = 1
    fact = 1
    while 2 * target_den > fact * (j + 1):  # 2/(J+1)! > 2^-(bits+1)
        j += 1
        fact *= j
    a = 1
    t = 1
    for i in range(j, 0, -1):
        t *= i
        a += t
    lo = mpq(a, fact)
    hi = lo + mpq(2, fact * (j + 1))
    return lo, hi


def _e_enclosure_at(bits: int) -> Enclosure:
    lo, hi = _e_series_bounds(bits)
    return Enclosure.from_rational_bounds(lo, hi, bits)


def e_enclosure(precision_bits: int) -> Enclosure:
    """Enclosure of e with width at most 2^(1 - precision_bits)."""
    if precision_bits < 16:
        raise ValueError("need at least 16 bits")
    return _e_enclosure_at(precision_bits + 3)


# ---------------------------------------------------------------------------
# continued fraction of e


def _extract_convergents(
    lo: "mpq", hi: "mpq", max_denominator: int
) -> Optional[List[Tuple[int, int]]]:
    """Convergents m/n with 1 < n <= max_denominator from a rational
    interval around e; None when a partial quotient is ambiguous."""
    h_prev, h_prev2 = 1, 0
    k_prev, k_prev2 = 0, 1
    out: List[Tuple[int, int]] = []
    while True:
        a_lo = lo.numerator // lo.denominator
        a_hi = hi.numerator // hi.denominator
        if a_lo != a_hi:
            return None
        a = int(a_lo)
        h = a * h_prev + h_prev2
        k = a * k_prev + k_prev2
        if k > max_denominator:
            return out
        if k > 1:
            out.append((h, k))
        h_prev2, h_prev = h_prev, h
        k_prev2, k_prev = k_prev, k
        lo_frac = lo - a
        hi_frac = hi - a
        if lo_frac <= 0:
            return None  # endpoint collided with the quotient; tighten
        lo, hi = 1 / hi_frac, 1 / lo_frac


def e_convergents(
    max_denominator: int, precision_cap_bits: Optional[int] = None
) -> List[Tuple[int, int]]:
    """Continued-fraction convergents m/n of e with 1 < n <= max_denominator.

    Partial quotients are extracted from the rational series enclosure and
    certified (both interval ends agree); the enclosure tightens until the
    whole run is unambiguous.  Every returned pair is checked to satisfy
    |e - m/n| < 1/n^2 by exact rational arithmetic against the enclosure.
    """
    if max_denominator < 2:
        raise ValueError("max_denominator must be at least 2")
    cap = precision_cap() if precision_cap_bits is None else precision_cap_bits
    bits = min(128, cap)
    while True:
        lo, hi = _e_series_bounds(bits)
        convs = _extract_convergents(lo, hi, max_denominator)
        if convs is not None:
            break
        if bits >= cap:
            raise IndeterminateComparisonError(
                f"continued fraction of e undecided at {cap} bits"
            )
        bits = min(bits * 2, cap)
    for m, n in convs:
        q = mpq(m, n)
        gap_hi = max(hi - q, q - lo)
        if not gap_hi < mpq(1, n * n):
            raise RuntimeError(
                f"convergent {m}/{n} failed |e - m/n| < 1/n^2; this is a bug"
            )
    return convs


def round_e_multiple(n: int, precision_cap_bits: Optional[int] = None) -> int:
    """round(e * n), certified: the nearest integer to e*n."""
    if n < 1:
        raise ValueError("n must be positive")

    def make(bits: int) -> Enclosure:
        return _e_enclosure_at(bits) * n + Fraction(1, 2)

    return floor_certified(
        make, start_bits=64, cap=precision_cap_bits, what=f"round(e*{n})"
    )


# ---------------------------------------------------------------------------
# the two bounds


@dataclass(frozen=True)
class ApproxRecord:
    """One rational m/n with its certified gap to e and both lower bounds.

    The factorial-side bound is a theorem, so gap.lower must exceed
    sondow_bound.upper in any well-formed record.
    """

    m: int
    n: int
    gap: Enclosure
    sondow_bound: Enclosure
    dirichlet_bound: Enclosure
    epsilon: Fraction

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must exceed 1")
        if not self.gap.lower > self.sondow_bound.upper:
            raise ValueError(
                f"gap enclosure does not clear the factorial-side bound at "
                f"m={self.m}, n={self.n}; this indicates a bug"
            )

    def csv_row(self) -> str:
        side = stronger_side(compare_enclosed(self.sondow_bound, self.dirichlet_bound))
        return ",".join(
            [
                str(self.m),
                str(self.n),
                format(self.gap.lower, ".17g"),
                format(self.gap.upper, ".17g"),
                format(self.sondow_bound.upper, ".17g"),
                format(self.dirichlet_bound.upper, ".17g"),
                str(self.epsilon.numerator),
                str(self.epsilon.denominator),
                side,
            ]
        )


def compare_enclosed(a: Enclosure, b: Enclosure) -> Cmp:
    if a.upper < b.lower:
        return Cmp.LT
    if a.lower > b.upper:
        return Cmp.GT
    return Cmp.EQ  # overlapping at report precision


def _dirichlet_exponent(epsilon: Fraction) -> ExponentK:
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    a, b = epsilon.numerator, epsilon.denominator
    return ExponentK(2 * b + a, b)


def check_sondow_inequality(
    m: int,
    n: int,
    epsilon: Fraction = Fraction(0),
    table: Optional[SmarandacheTable] = None,
    precision_cap_bits: Optional[int] = None,
) -> ApproxRecord:
    """Certify |e - m/n| > 1/(S(n)+1)! and report both bounds.

    The comparison escalates precision until the gap enclosure clears the
    factorial-side bound.  A certified violation raises RuntimeError: the
    inequality is a theorem, so it can only signal an implementation bug.
    An undecided comparison at the precision cap raises
    IndeterminateComparisonError.
    """
    if n < 2:
        raise ValueError("n must exceed 1")
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    s = table.s(n) if table is not None and n <= table.limit else smarandache(n)
    cap = precision_cap() if precision_cap_bits is None else precision_cap_bits
    bits = min(128, cap)
    q = mpq(m, n)
    kexp = _dirichlet_exponent(epsilon)
    while True:
        gap = abs(_e_enclosure_at(bits) - q)
        sondow = (-log_factorial_enclosure(s + 1, bits)).exp()
        if gap.lower > sondow.upper:
            dirichlet = (
                log_enclosure(n, bits) * Fraction(-kexp.p, kexp.q)
            ).exp()
            return ApproxRecord(
                m=m,
                n=n,
                gap=gap,
                sondow_bound=sondow,
                dirichlet_bound=dirichlet,
                epsilon=epsilon,
            )
        if gap.upper < sondow.lower:
            raise RuntimeError(
                f"|e - {m}/{n}| <= 1/(S({n})+1)! certified; the bound is a "
                "theorem, so this is an implementation bug"
            )
        if bits >= cap:
            raise IndeterminateComparisonError(
                f"gap vs factorial bound undecided at {cap} bits for n={n}", n=n
            )
        bits = min(bits * 2, cap)


def compare_bounds(
    n: int,
    epsilon: Fraction = Fraction(0),
    table: Optional[SmarandacheTable] = None,
) -> Cmp:
    """Exact ordering of 1/(S(n)+1)! versus 1/n^(2+eps).

    Reduces to comparing (S(n)+1)! with n^(2+eps), done in exact integer
    arithmetic; the exponent-side bound is the stronger one exactly when
    the factorial is larger.
    """
    if n < 2:
        raise ValueError("n must exceed 1")
    epsilon = Fraction(epsilon)
    kexp = _dirichlet_exponent(epsilon)
    s = table.s(n) if table is not None and n <= table.limit else smarandache(n)
    factorial_vs_power = exact_compare_factorial_power(s + 1, n, kexp)
    return Cmp(-factorial_vs_power)


def stronger_side(order: Cmp) -> str:
    """Which bound is stronger given the ordering of sondow vs dirichlet."""
    if order is Cmp.LT:
        return "dirichlet"
    if order is Cmp.GT:
        return "sondow"
    return "tie"


def count_sondow_not_weaker(
    x: int,
    epsilon: Fraction = Fraction(0),
    table: Optional[SmarandacheTable] = None,
) -> int:
    """Count of n in [2, x] where the factorial-side bound is >= the
    exponent-side bound, i.e. (S(n)+1)! <= n^(2+eps).

    Pruned by the factorial threshold: qualifying n have S(n)+1 below the
    least T with (T!)^q > x^p.
    """
    if x < 2:
        return 0
    if table is None or table.limit < x:
        raise ValueError("a table covering x is required")
    epsilon = Fraction(epsilon)
    kexp = _dirichlet_exponent(epsilon)
    thresh = factorial_threshold(x, kexp)
    s_of = table.s_of
    bound = s_of.dtype.type(max(thresh - 1, 1))
    cands = (np.nonzero(s_of[2 : x + 1] < bound)[0] + 2).tolist()
    return sum(
        1
        for n in cands
        if exact_compare_factorial_power(int(s_of[n]) + 1, n, kexp) is not Cmp.GT
    )
