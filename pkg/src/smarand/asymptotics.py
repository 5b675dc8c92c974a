"""Bound-shape evaluation and diagnostics for the census counts.

The analytic bounds carry unknowable implied constants, so nothing here
asserts an inequality against them.  Each diagnostic packages an exact
count together with the bound's core term (constant set to 1) and the
shape ratio

    -log(count / x) / sqrt(2 log x log log x),

which exceeding-1-in-the-limit is what the bound's shape predicts; we
only record and trend-check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from gmpy2 import mpq

from .arith import ExponentK
from .census import count_M, count_Nk
from .enclosure import (
    IndeterminateComparisonError,
    log_enclosure,
    precision_cap,
)
from .logfact import _nudge_up, batch_log_enclosures, log_factorial_enclosure
from .smarandache import SmarandacheTable

__all__ = [
    "DIAGNOSTIC_CSV_HEADER",
    "BoundDiagnostic",
    "diagnostic_from_count",
    "ivic_bound_core",
    "shape_ratio",
    "tenenbaum_bound_core",
    "theorem1_diagnostic",
    "theorem2_diagnostic",
    "verify_eq5_chain",
    "verify_eq5_range",
]

DIAGNOSTIC_CSV_HEADER = "x,k_num,k_den,exact_count,bound_core,shape_ratio"

_E_TO_E = math.exp(math.e)


def shape_ratio(count: int, x: int) -> float:
    """-log(count/x) / sqrt(2 log x log log x); +inf when count = 0."""
    if count == 0:
        return math.inf
    lx = math.log(x)
    return -math.log(count / x) / math.sqrt(2.0 * lx * math.log(lx))


@dataclass(frozen=True)
class BoundDiagnostic:
    """Exact count next to a bound core whose implied constant is unknown."""

    x: int
    exact_count: int
    bound_core: float
    shape_ratio: float
    k: Optional[ExponentK] = None

    @property
    def count_to_bound_ratio(self) -> float:
        """exact_count / bound_core; for the M diagnostic this equals
        M(x) sqrt(log x) / x, the quantity claimed to stay bounded."""
        return self.exact_count / self.bound_core

    def csv_row(self) -> str:
        k_num = str(self.k.p) if self.k is not None else ""
        k_den = str(self.k.q) if self.k is not None else ""
        return (
            f"{self.x},{k_num},{k_den},{self.exact_count},"
            f"{self.bound_core:.15g},{self.shape_ratio:.15g}"
        )


def ivic_bound_core(x: float) -> float:
    """x exp(-sqrt(2 log x log log x)), defined for x > e^e."""
    if x <= _E_TO_E:
        raise ValueError(f"need x > e^e = {_E_TO_E:.6f}, got {x}")
    lx = math.log(x)
    return x * math.exp(-math.sqrt(2.0 * lx * math.log(lx)))


def tenenbaum_bound_core(x: float, y: float) -> float:
    """x exp(-log x / (2 log y)) for 2 <= y <= x, implied constant 1."""
    if not 2 <= y <= x:
        raise ValueError(f"need 2 <= y <= x, got x={x}, y={y}")
    return x * math.exp(-math.log(x) / (2.0 * math.log(y)))


def diagnostic_from_count(
    x: int, count: int, bound_core: float, k: Optional[ExponentK] = None
) -> BoundDiagnostic:
    return BoundDiagnostic(
        x=x, exact_count=count, bound_core=bound_core, shape_ratio=shape_ratio(count, x), k=k
    )


def theorem1_diagnostic(
    x: int, k: ExponentK, table: SmarandacheTable, threads: int = 1
) -> BoundDiagnostic:
    """Exact N_k(x) against the core of its density bound; x > 16."""
    if x <= 16:
        raise ValueError("diagnostic needs x > 16")
    report = count_Nk(x, k, table, threads=threads)
    return diagnostic_from_count(x, report.count, ivic_bound_core(x), k)


def theorem2_diagnostic(
    x: int, table: SmarandacheTable, precision_cap_bits: Optional[int] = None
) -> BoundDiagnostic:
    """Exact M(x) against the core x / sqrt(log x); x >= 16."""
    if x < 16:
        raise ValueError("diagnostic needs x >= 16")
    report = count_M(x, table, precision_cap_bits=precision_cap_bits)
    return diagnostic_from_count(x, report.count, x / math.sqrt(math.log(x)))


# ---------------------------------------------------------------------------
# the case (ii) inequality chain at S(n) = P(n) = P


def verify_eq5_chain(p: int, precision_cap_bits: Optional[int] = None) -> bool:
    """Certified check, for a single integer P >= 7, of

        e (P/e)^P <= P!        and        P <= 1 + P log(P/e).

    Checked in log form: 1 + P(log P - 1) <= log P! and
    (2P - 1)/P <= log P.  Raises ValueError below 7, where the second
    inequality genuinely fails and the chain does not apply.
    """
    if p < 7:
        raise ValueError("the chain requires P >= 7")
    cap = precision_cap() if precision_cap_bits is None else precision_cap_bits
    bits = min(64, cap)
    first = second = None
    while True:
        log_p = log_enclosure(p, bits)
        lhs = log_p * p - (p - 1)  # 1 + P(log P - 1)
        log_fact = log_factorial_enclosure(p, bits)
        if first is None:
            if lhs.upper <= log_fact.lower:
                first = True
            elif lhs.lower > log_fact.upper:
                first = False
        if second is None:
            target = mpq(2 * p - 1, p)
            if log_p.lower >= target:
                second = True
            elif log_p.upper < target:
                second = False
        if first is not None and second is not None:
            return first and second
        if bits >= cap:
            raise IndeterminateComparisonError(
                f"chain at P={p} undecided at {cap} bits", n=p
            )
        bits = min(bits * 2, cap)


def verify_eq5_range(p_min: int = 7, p_max: int = 10_000) -> List[int]:
    """All P in [p_min, p_max] failing the chain; expected empty.

    The bulk pass uses the batch directed bounds with one outward nudge
    per IEEE operation; stragglers (none in practice) are retried with
    the scalar certified check.
    """
    if p_min < 7:
        raise ValueError("the chain requires P >= 7")
    if p_max < p_min:
        return []
    lg_lo, lg_hi, lf_lo, lf_hi = batch_log_enclosures(p_max)
    ps = np.arange(p_min, p_max + 1, dtype=np.float64)
    lo_slice = lg_lo[p_min : p_max + 1]
    hi_slice = lg_hi[p_min : p_max + 1]
    # upper bound of 1 + P(log P - 1)
    lhs_hi = _nudge_up(_nudge_up(ps * hi_slice) - (ps - 1.0))
    ok_first = lhs_hi <= lf_lo[p_min : p_max + 1]
    # (2P - 1)/P <= log P, via an upper bound of the left side
    ratio_hi = _nudge_up((2.0 * ps - 1.0) / ps)
    ok_second = ratio_hi <= lo_slice
    suspects = np.nonzero(~(ok_first & ok_second))[0]
    return [int(i) + p_min for i in suspects if not verify_eq5_chain(int(i) + p_min)]
