"""Directed-rounding real enclosures backed by MPFR (via gmpy2).

An Enclosure is a closed interval [lower, upper] guaranteed to contain
the exact real value it stands for; every bound is produced under an
explicit MPFR rounding direction.  Comparisons are reported only when
the intervals are disjoint.  Ambiguous comparisons escalate the working
precision, and at the precision cap raise IndeterminateComparisonError
rather than guess.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import gmpy2
from gmpy2 import mpfr, mpq

__all__ = [
    "DEFAULT_PRECISION_CAP_BITS",
    "PRECISION_CAP_ENV",
    "Enclosure",
    "IndeterminateComparisonError",
    "ceil_certified",
    "certified_le",
    "certified_lt",
    "ctx_down",
    "ctx_up",
    "floor_certified",
    "log_enclosure",
    "pi_enclosure",
    "precision_cap",
    "to_mpq",
]

DEFAULT_PRECISION_CAP_BITS = 4096
PRECISION_CAP_ENV = "SMARAND_PRECISION_CAP_BITS"

RationalLike = Union[int, Fraction, "mpq"]


class IndeterminateComparisonError(Exception):
    """A certified comparison stayed ambiguous at the precision cap."""

    def __init__(self, message: str, n: Optional[int] = None):
        super().__init__(message)
        self.n = n


def precision_cap() -> int:
    """Escalation ceiling in bits; SMARAND_PRECISION_CAP_BITS overrides."""
    raw = os.environ.get(PRECISION_CAP_ENV)
    if raw is None:
        return DEFAULT_PRECISION_CAP_BITS
    cap = int(raw)
    if cap < 64:
        raise ValueError(f"{PRECISION_CAP_ENV} must be at least 64, got {cap}")
    return cap


@lru_cache(maxsize=None)
def ctx_down(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def ctx_up(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def to_mpq(value: RationalLike) -> "mpq":
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


_ZERO = mpfr(0)


def _round_to(value, ctx) -> "mpfr":
    """Convert an exact int/Fraction/mpq or an mpfr to mpfr under ctx."""
    if isinstance(value, type(_ZERO)):
        return ctx.add(value, _ZERO)
    return ctx.add(to_mpq(value), _ZERO)


@dataclass(frozen=True)
class Enclosure:
    """Interval [lower, upper] containing an exact real value."""

    lower: "mpfr"
    upper: "mpfr"
    precision_bits: int

    def __post_init__(self) -> None:
        if not self.lower <= self.upper:
            raise ValueError(f"inverted enclosure [{self.lower}, {self.upper}]")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rational(cls, value: RationalLike, bits: int) -> "Enclosure":
        q = to_mpq(value)
        return cls(_round_to(q, ctx_down(bits)), _round_to(q, ctx_up(bits)), bits)

    @classmethod
    def from_rational_bounds(
        cls, lo: RationalLike, hi: RationalLike, bits: int
    ) -> "Enclosure":
        return cls(_round_to(to_mpq(lo), ctx_down(bits)), _round_to(to_mpq(hi), ctx_up(bits)), bits)

    @classmethod
    def exact_zero(cls, bits: int) -> "Enclosure":
        return cls(mpfr(0), mpfr(0), bits)

    # -- interval queries ---------------------------------------------

    def width(self) -> "mpfr":
        return ctx_up(self.precision_bits).sub(self.upper, self.lower)

    def contains(self, value: RationalLike) -> bool:
        q = value if isinstance(value, type(_ZERO)) else to_mpq(value)
        return self.lower <= q <= self.upper

    def certainly_lt(self, other) -> bool:
        lo = other.lower if isinstance(other, Enclosure) else to_mpq(other)
        return self.upper < lo

    def certainly_le(self, other) -> bool:
        lo = other.lower if isinstance(other, Enclosure) else to_mpq(other)
        return self.upper <= lo

    def certainly_gt(self, other) -> bool:
        hi = other.upper if isinstance(other, Enclosure) else to_mpq(other)
        return self.lower > hi

    # -- arithmetic, all outward rounded ------------------------------

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.from_rational(other, self.precision_bits)

    def _bits_with(self, other: "Enclosure") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = self._bits_with(o)
        return Enclosure(
            ctx_down(bits).add(self.lower, o.lower),
            ctx_up(bits).add(self.upper, o.upper),
            bits,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = self._bits_with(o)
        return Enclosure(
            ctx_down(bits).sub(self.lower, o.upper),
            ctx_up(bits).sub(self.upper, o.lower),
            bits,
        )

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other).__sub__(self)

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.upper, -self.lower, self.precision_bits)

    def __abs__(self) -> "Enclosure":
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return Enclosure(mpfr(0), max(-self.lower, self.upper), self.precision_bits)

    def __mul__(self, other) -> "Enclosure":
        o = self._coerce(other)
        bits = self._bits_with(o)
        cd, cu = ctx_down(bits), ctx_up(bits)
        los = (
            cd.mul(self.lower, o.lower),
            cd.mul(self.lower, o.upper),
            cd.mul(self.upper, o.lower),
            cd.mul(self.upper, o.upper),
        )
        his = (
            cu.mul(self.lower, o.lower),
            cu.mul(self.lower, o.upper),
            cu.mul(self.upper, o.lower),
            cu.mul(self.upper, o.upper),
        )
        return Enclosure(min(los), max(his), bits)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        o = self._coerce(other)
        if o.lower <= 0 <= o.upper:
            raise ZeroDivisionError("division by an enclosure containing zero")
        bits = self._bits_with(o)
        cd, cu = ctx_down(bits), ctx_up(bits)
        los = (
            cd.div(self.lower, o.lower),
            cd.div(self.lower, o.upper),
            cd.div(self.upper, o.lower),
            cd.div(self.upper, o.upper),
        )
        his = (
            cu.div(self.lower, o.lower),
            cu.div(self.lower, o.upper),
            cu.div(self.upper, o.lower),
            cu.div(self.upper, o.upper),
        )
        return Enclosure(min(los), max(his), bits)

    # -- monotone transcendental maps ----------------------------------

    def log(self) -> "Enclosure":
        if self.lower <= 0:
            raise ValueError("log requires a strictly positive enclosure")
        bits = self.precision_bits
        return Enclosure(ctx_down(bits).log(self.lower), ctx_up(bits).log(self.upper), bits)

    def exp(self) -> "Enclosure":
        bits = self.precision_bits
        return Enclosure(ctx_down(bits).exp(self.lower), ctx_up(bits).exp(self.upper), bits)

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


def pi_enclosure(bits: int) -> Enclosure:
    return Enclosure(ctx_down(bits).const_pi(), ctx_up(bits).const_pi(), bits)


def log_enclosure(value: RationalLike, bits: int) -> Enclosure:
    """Enclosure of log(value) for an exact positive rational."""
    q = to_mpq(value)
    if q <= 0:
        raise ValueError("log requires a positive value")
    return Enclosure(ctx_down(bits).log(q), ctx_up(bits).log(q), bits)


MakeEnclosure = Callable[[int], Enclosure]


def _escalate(bits: int, cap: int) -> int:
    return min(bits * 2, cap)


def certified_le(
    make_lhs: MakeEnclosure,
    make_rhs: MakeEnclosure,
    start_bits: int = 64,
    cap: Optional[int] = None,
    what: str = "comparison",
    n: Optional[int] = None,
) -> bool:
    """Decide lhs <= rhs with precision escalation; never guesses.

    Returns True when lhs <= rhs is certain, False when lhs > rhs is
    certain, and raises IndeterminateComparisonError at the cap.
    """
    cap = precision_cap() if cap is None else cap
    bits = min(start_bits, cap)
    while True:
        a = make_lhs(bits)
        b = make_rhs(bits)
        if a.upper <= b.lower:
            return True
        if a.lower > b.upper:
            return False
        if bits >= cap:
            raise IndeterminateComparisonError(
                f"{what} undecided at {cap} bits", n=n
            )
        bits = _escalate(bits, cap)


def certified_lt(
    make_lhs: MakeEnclosure,
    make_rhs: MakeEnclosure,
    start_bits: int = 64,
    cap: Optional[int] = None,
    what: str = "comparison",
    n: Optional[int] = None,
) -> bool:
    """Decide lhs < rhs strictly, with escalation as in certified_le."""
    cap = precision_cap() if cap is None else cap
    bits = min(start_bits, cap)
    while True:
        a = make_lhs(bits)
        b = make_rhs(bits)
        if a.upper < b.lower:
            return True
        if a.lower >= b.upper:
            return False
        if bits >= cap:
            raise IndeterminateComparisonError(
                f"{what} undecided at {cap} bits", n=n
            )
        bits = _escalate(bits, cap)


def _floor_exact(x: "mpfr") -> int:
    # via mpq to dodge any context rounding; mpfr -> mpq is lossless
    q = mpq(x)
    return q.numerator // q.denominator


def _ceil_exact(x: "mpfr") -> int:
    q = mpq(x)
    return -((-q.numerator) // q.denominator)


def floor_certified(
    make: MakeEnclosure,
    start_bits: int = 64,
    cap: Optional[int] = None,
    what: str = "floor",
) -> int:
    """Floor of a real given by enclosures, escalating until unambiguous."""
    cap = precision_cap() if cap is None else cap
    bits = min(start_bits, cap)
    while True:
        e = make(bits)
        lo = _floor_exact(e.lower)
        hi = _floor_exact(e.upper)
        if lo == hi:
            return lo
        if bits >= cap:
            raise IndeterminateComparisonError(f"{what} undecided at {cap} bits")
        bits = _escalate(bits, cap)


def ceil_certified(
    make: MakeEnclosure,
    start_bits: int = 64,
    cap: Optional[int] = None,
    what: str = "ceil",
) -> int:
    cap = precision_cap() if cap is None else cap
    bits = min(start_bits, cap)
    while True:
        e = make(bits)
        lo = _ceil_exact(e.lower)
        hi = _ceil_exact(e.upper)
        if lo == hi:
            return lo
        if bits >= cap:
            raise IndeterminateComparisonError(f"{what} undecided at {cap} bits")
        bits = _escalate(bits, cap)
