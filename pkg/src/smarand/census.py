"""Exact evaluation of the counting functions.

All counts are exact integers:

* N(x)        -- n <= x with S(n) != P(n)
* N_k(x)      -- n <= x with S(n)! <= n^k, split into the S != P and
                 S = P parts (N_k1 / N_k2)
* M(x)        -- n in [3, x] with log S(n)! <= n^(1/log log n), decided by
                 certified enclosures with precision escalation
* Psi(x, y)   -- n <= x with P(n) <= y (y-smooth census, counting n = 1)

plus the sporadic-set scan (S = P <= 5), the factorial threshold used to
prune sweeps, and a table-free divisor-walk evaluation of N_k.

Counting sweeps are segmented; segments aggregate by addition in index
order, so results are identical at any parallelism degree.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from gmpy2 import mpfr

from .arith import Cmp, ExponentK, exact_compare_factorial_power, legendre_valuation
from .enclosure import Enclosure, certified_le, ctx_down, log_enclosure, precision_cap
from .logfact import log_factorial_enclosure
from .smarandache import (
    SmarandacheTable,
    _smarandache_prime_power_unchecked,
    largest_prime_factor,
    smarandache,
)

__all__ = [
    "CSV_HEADER",
    "CensusReport",
    "DEFAULT_WITNESS_CAP",
    "WitnessStream",
    "case_i_set",
    "census_csv_rows",
    "count_M",
    "count_Nk",
    "count_Nk_by_divisors",
    "count_S_neq_P",
    "factorial_threshold",
    "m_witnesses",
    "nk_witnesses",
    "psi_smooth_count",
    "psi_witnesses",
    "s_neq_p_witnesses",
]

DEFAULT_WITNESS_CAP = 100_000

CSV_HEADER = "kind,x,k_num,k_den,y,count,density"

_SEGMENT = 1 << 20


@dataclass(frozen=True)
class CensusReport:
    """One exact count with its parameters and density."""

    kind: str  # N, N_k, N_k1, N_k2, M, Psi
    x: int
    count: int
    density: float
    k: Optional[ExponentK] = None
    y: Optional[int] = None
    parts: Tuple["CensusReport", ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.count <= self.x:
            raise ValueError(f"count {self.count} outside [0, {self.x}]")
        if self.density != self.count / self.x:
            raise ValueError("density must equal count/x")

    def csv_row(self) -> str:
        k_num = str(self.k.p) if self.k is not None else ""
        k_den = str(self.k.q) if self.k is not None else ""
        y = str(self.y) if self.y is not None else ""
        return f"{self.kind},{self.x},{k_num},{k_den},{y},{self.count},{self.density:.15g}"


def census_csv_rows(report: CensusReport) -> List[str]:
    """CSV rows for a report followed by its sub-counts."""
    rows = [report.csv_row()]
    for part in report.parts:
        rows.extend(census_csv_rows(part))
    return rows


@dataclass(frozen=True)
class WitnessStream:
    """The counted n themselves, materialized up to a cap.

    values is strictly increasing; truncated means the census counted
    more witnesses than the cap allowed to materialize.
    """

    kind: str
    x: int
    values: Tuple[int, ...]
    truncated: bool
    k: Optional[ExponentK] = None
    y: Optional[int] = None


def _check_table(table: SmarandacheTable, x: int) -> None:
    if x < 1:
        raise ValueError("x must be positive")
    if table.limit < x:
        raise ValueError(f"table limit {table.limit} is below x={x}")


def _segments(x: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + _SEGMENT, x + 1)) for lo in range(1, x + 1, _SEGMENT)]


def _sum_segments(fn: Callable[[int, int], int], x: int, threads: int) -> int:
    segs = _segments(x)
    if threads <= 1 or len(segs) == 1:
        return sum(fn(a, b) for a, b in segs)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(lambda ab: fn(ab[0], ab[1]), segs))


# ---------------------------------------------------------------------------
# N(x): S != P


def count_S_neq_P(x: int, table: SmarandacheTable, threads: int = 1) -> CensusReport:
    """Exact count of n <= x with S(n) != P(n)."""
    _check_table(table, x)
    s_of, p_of = table.s_of, table.p_of

    def seg(a: int, b: int) -> int:
        return int(np.count_nonzero(s_of[a:b] != p_of[a:b]))

    count = _sum_segments(seg, x, threads)
    return CensusReport(kind="N", x=x, count=count, density=count / x)


def s_neq_p_witnesses(
    x: int, table: SmarandacheTable, cap: int = DEFAULT_WITNESS_CAP
) -> WitnessStream:
    _check_table(table, x)
    out: List[int] = []
    truncated = False
    for a, b in _segments(x):
        hits = np.nonzero(table.s_of[a:b] != table.p_of[a:b])[0]
        for h in hits:
            if len(out) >= cap:
                truncated = True
                break
            out.append(int(h) + a)
        if truncated:
            break
    return WitnessStream(kind="N", x=x, values=tuple(out), truncated=truncated)


# ---------------------------------------------------------------------------
# Psi(x, y): smooth census


def psi_smooth_count(
    x: int, y: int, table: SmarandacheTable, threads: int = 1
) -> CensusReport:
    """Exact Psi(x, y): count of n <= x with P(n) <= y (n = 1 included).

    y = 1 is admitted and counts only n = 1; the smooth-census bound
    formulas elsewhere need y >= 2, but the count itself is well defined.
    """
    if y < 1:
        raise ValueError("y must be at least 1")
    _check_table(table, x)
    p_of = table.p_of
    bound = p_of.dtype.type(min(y, np.iinfo(p_of.dtype).max))

    def seg(a: int, b: int) -> int:
        return int(np.count_nonzero(p_of[a:b] <= bound))

    count = _sum_segments(seg, x, threads)
    return CensusReport(kind="Psi", x=x, count=count, density=count / x, y=y)


def psi_witnesses(
    x: int, y: int, table: SmarandacheTable, cap: int = DEFAULT_WITNESS_CAP
) -> WitnessStream:
    if y < 1:
        raise ValueError("y must be at least 1")
    _check_table(table, x)
    out: List[int] = []
    truncated = False
    for a, b in _segments(x):
        hits = np.nonzero(table.p_of[a:b] <= y)[0]
        for h in hits:
            if len(out) >= cap:
                truncated = True
                break
            out.append(int(h) + a)
        if truncated:
            break
    return WitnessStream(kind="Psi", x=x, values=tuple(out), truncated=truncated, y=y)


# ---------------------------------------------------------------------------
# factorial threshold and N_k


def factorial_threshold(x: int, k: ExponentK) -> int:
    """Least T with (T!)^q > x^p: counted n must then have S(n) < T."""
    if x < 1:
        raise ValueError("x must be positive")
    xp = x**k.p
    f = 1
    t = 0
    while True:
        t += 1
        f *= t
        if f**k.q > xp:
            return t


def _nk_counted(
    x: int, k: ExponentK, table: SmarandacheTable, threads: int
) -> np.ndarray:
    """Sorted array of all n <= x with S(n)! <= n^k."""
    s_of = table.s_of
    thresh = factorial_threshold(x, k)
    bound = s_of.dtype.type(min(thresh, np.iinfo(s_of.dtype).max))

    def seg(a: int, b: int) -> np.ndarray:
        return np.nonzero(s_of[a:b] < bound)[0].astype(np.int64) + a

    segs = _segments(x)
    if threads <= 1 or len(segs) == 1:
        cand_parts = [seg(a, b) for a, b in segs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cand_parts = list(pool.map(lambda ab: seg(ab[0], ab[1]), segs))
    candidates = np.concatenate(cand_parts) if cand_parts else np.empty(0, np.int64)
    counted = [
        n
        for n in candidates.tolist()
        if exact_compare_factorial_power(int(s_of[n]), n, k) is not Cmp.GT
    ]
    return np.asarray(counted, dtype=np.int64)


def _nk_report(
    x: int, k: ExponentK, counted: np.ndarray, s_vals: np.ndarray, p_vals: np.ndarray
) -> CensusReport:
    neq = int(np.count_nonzero(s_vals != p_vals))
    total = len(counted)
    part1 = CensusReport(kind="N_k1", x=x, count=neq, density=neq / x, k=k)
    part2 = CensusReport(kind="N_k2", x=x, count=total - neq, density=(total - neq) / x, k=k)
    return CensusReport(
        kind="N_k", x=x, count=total, density=total / x, k=k, parts=(part1, part2)
    )


def count_Nk(
    x: int, k: ExponentK, table: SmarandacheTable, threads: int = 1
) -> CensusReport:
    """Exact N_k(x) with its decomposition into the S != P and S = P parts.

    Candidates are pruned through the factorial threshold (S(n) >= T
    forces S(n)! > x^k >= n^k), then decided one by one with the exact
    factorial-power comparison.
    """
    _check_table(table, x)
    counted = _nk_counted(x, k, table, threads)
    s_vals = table.s_of[counted] if len(counted) else np.empty(0, table.s_of.dtype)
    p_vals = table.p_of[counted] if len(counted) else np.empty(0, table.p_of.dtype)
    return _nk_report(x, k, counted, s_vals, p_vals)


def nk_witnesses(
    x: int,
    k: ExponentK,
    table: SmarandacheTable,
    cap: int = DEFAULT_WITNESS_CAP,
) -> WitnessStream:
    _check_table(table, x)
    counted = _nk_counted(x, k, table, threads=1)
    vals = tuple(int(n) for n in counted[:cap])
    return WitnessStream(
        kind="N_k", x=x, values=vals, truncated=len(counted) > cap, k=k
    )


# ---------------------------------------------------------------------------
# M(x)


def _power_loglog_enclosure(n: int, bits: int) -> Enclosure:
    """Enclosure of n^(1 / log log n) = exp(log n / log log n); needs n >= 3."""
    if n < 3:
        raise ValueError("n^(1/log log n) needs n >= 3")
    ln = log_enclosure(n, bits)
    lln = ln.log()
    return (ln / lln).exp()


def _m_member(n: int, s: int, cap: Optional[int]) -> bool:
    """Certified decision of log S(n)! <= n^(1/log log n)."""
    return certified_le(
        lambda bits: log_factorial_enclosure(s, bits),
        lambda bits: _power_loglog_enclosure(n, bits),
        start_bits=64,
        cap=cap,
        what=f"membership of n={n} in the M census",
        n=n,
    )


def _factorial_log_exceeds(bound_hi: "mpfr") -> int:
    """Least T whose certified lower bound of log T! exceeds bound_hi."""
    cd = ctx_down(53)
    s = mpfr(0)
    t = 1
    while not s > bound_hi:
        t += 1
        s = cd.add(s, cd.log(t))
    return t


def _m_counted(x: int, table: SmarandacheTable, cap: Optional[int]) -> List[int]:
    s_of = table.s_of
    counted = [n for n in range(3, min(x, 15) + 1) if _m_member(n, int(s_of[n]), cap)]
    if x >= 16:
        # n^(1/log log n) increases for n >= 16, so its value at x bounds
        # the right side for every candidate in [16, x].
        rhs_hi = _power_loglog_enclosure(x, 64).upper
        t_safe = _factorial_log_exceeds(rhs_hi)
        bound = s_of.dtype.type(min(t_safe, np.iinfo(s_of.dtype).max))
        cands = np.nonzero(s_of[16 : x + 1] < bound)[0] + 16
        for n in cands.tolist():
            if _m_member(n, int(s_of[n]), cap):
                counted.append(n)
    return counted


def count_M(
    x: int,
    table: SmarandacheTable,
    precision_cap_bits: Optional[int] = None,
) -> CensusReport:
    """Exact M(x): count of n in [3, x] with log S(n)! <= n^(1/log log n).

    n = 1 and n = 2 are excluded: the exponent 1/log log n is undefined at
    n = 1 and negative at n = 2.  Every membership is decided by certified
    enclosures; an undecidable comparison raises
    IndeterminateComparisonError naming the offending n.
    """
    if x < 3:
        raise ValueError("M census needs x >= 3")
    _check_table(table, x)
    cap = precision_cap() if precision_cap_bits is None else precision_cap_bits
    counted = _m_counted(x, table, cap)
    return CensusReport(kind="M", x=x, count=len(counted), density=len(counted) / x)


def m_witnesses(
    x: int,
    table: SmarandacheTable,
    cap: int = DEFAULT_WITNESS_CAP,
    precision_cap_bits: Optional[int] = None,
) -> WitnessStream:
    if x < 3:
        raise ValueError("M census needs x >= 3")
    _check_table(table, x)
    pcap = precision_cap() if precision_cap_bits is None else precision_cap_bits
    counted = _m_counted(x, table, pcap)
    return WitnessStream(
        kind="M", x=x, values=tuple(counted[:cap]), truncated=len(counted) > cap
    )


# ---------------------------------------------------------------------------
# the sporadic set S = P <= 5


def case_i_set() -> List[int]:
    """All n with S(n) = P(n) <= 5, by scanning the divisors of 5! = 120.

    Any such n divides S(n)! which divides 120, so the divisor scan is
    exhaustive.  Exactly 12 integers qualify.
    """
    divisors = [d for d in range(1, 121) if 120 % d == 0]
    out = []
    for d in divisors:
        s = smarandache(d)
        if s == largest_prime_factor(d) and s <= 5:
            out.append(d)
    return sorted(out)


# ---------------------------------------------------------------------------
# divisor-walk evaluation of N_k (no table required)


_MAX_DIVISOR_NODES = 1 << 26


def _factorial_prime_powers(m: int) -> List[Tuple[int, int]]:
    """(prime, exponent) pairs of m! via the factorial valuation."""
    if m < 2:
        return []
    sieve = bytearray(m + 1)
    out = []
    for p in range(2, m + 1):
        if not sieve[p]:
            out.append((p, legendre_valuation(p, m)))
            for q in range(p * p, m + 1, p):
                sieve[q] = 1
    return out


def count_Nk_by_divisors(x: int, k: ExponentK) -> CensusReport:
    """N_k(x) evaluated by walking divisors of (T-1)! where T is the
    factorial threshold.

    Every counted n satisfies n | S(n)! with S(n) < T, so n divides
    (T-1)!; the walk visits each divisor <= x once, with S and P read off
    the chosen prime powers.  Must agree with count_Nk exactly.
    """
    if x < 1:
        raise ValueError("x must be positive")
    thresh = factorial_threshold(x, k)
    powers = _factorial_prime_powers(thresh - 1)
    nodes = 1
    for _, e in powers:
        nodes *= e + 1
        if nodes > _MAX_DIVISOR_NODES:
            raise OverflowError(
                f"divisor walk of {thresh - 1}! is too large to enumerate"
            )
    counted: List[Tuple[int, int, int]] = []  # (n, S(n), P(n))

    def walk(i: int, d: int, s_max: int, p_max: int) -> None:
        if i == len(powers):
            s = s_max if d > 1 else 1
            p = p_max if d > 1 else 1
            if exact_compare_factorial_power(s, d, k) is not Cmp.GT:
                counted.append((d, s, p))
            return
        prime, emax = powers[i]
        val = 1
        for a in range(emax + 1):
            nd = d * val
            if nd > x:
                break
            if a == 0:
                walk(i + 1, nd, s_max, p_max)
            else:
                walk(
                    i + 1,
                    nd,
                    max(s_max, _smarandache_prime_power_unchecked(prime, a)),
                    prime,
                )
            val *= prime
    walk(0, 1, 0, 0)
    counted.sort()
    ns = np.asarray([c[0] for c in counted], dtype=np.int64)
    s_vals = np.asarray([c[1] for c in counted], dtype=np.int64)
    p_vals = np.asarray([c[2] for c in counted], dtype=np.int64)
    return _nk_report(x, k, ns, s_vals, p_vals)


def nk_witnesses_by_divisors(
    x: int, k: ExponentK, cap: int = DEFAULT_WITNESS_CAP
) -> WitnessStream:
    """Counted n of the divisor walk, with their S and P recomputable via
    the table-free route; used by sweeps at scales where no table exists."""
    report = count_Nk_by_divisors(x, k)
    # the walk is cheap; rerun it to collect values when witnesses are wanted
    thresh = factorial_threshold(x, k)
    powers = _factorial_prime_powers(thresh - 1)
    out: List[int] = []

    def walk(i: int, d: int, s_max: int) -> None:
        if i == len(powers):
            s = s_max if d > 1 else 1
            if exact_compare_factorial_power(s, d, k) is not Cmp.GT:
                out.append(d)
            return
        prime, emax = powers[i]
        val = 1
        for a in range(emax + 1):
            nd = d * val
            if nd > x:
                break
            walk(i + 1, nd, max(s_max, _smarandache_prime_power_unchecked(prime, a)) if a else s_max)
            val *= prime

    walk(0, 1, 0)
    out.sort()
    assert len(out) == report.count
    return WitnessStream(
        kind="N_k", x=x, values=tuple(out[:cap]), truncated=len(out) > cap, k=k
    )
