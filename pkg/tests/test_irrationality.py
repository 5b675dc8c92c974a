import math
from fractions import Fraction

import pytest
from gmpy2 import mpq

from smarand.arith import Cmp
from smarand.enclosure import IndeterminateComparisonError
from smarand.irrationality import (
    ApproxRecord,
    _e_series_bounds,
    check_sondow_inequality,
    compare_bounds,
    count_sondow_not_weaker,
    e_convergents,
    e_enclosure,
    round_e_multiple,
    stronger_side,
)
from smarand.smarandache import build_table, smarandache

# First 100 decimal digits of e, an independent published constant.
E_100 = Fraction(
    27182818284590452353602874713526624977572470936999595749669676277240766303535475945713821785251664274,
    10**100,
)


def binary_split_partial_sum(j_max):
    """Exact sum of 1/j! for j = 0..j_max by divide-and-conquer."""

    def rec(a, b):
        # returns (p, q) with sum_{j=a}^{b} prod_{i=a}^{j} 1/i = p/q  (relative tail)
        if a == b:
            return 1, a if a > 0 else 1
        mid = (a + b) // 2
        p1, q1 = rec(a, mid)
        p2, q2 = rec(mid + 1, b)
        # combine: sum = p1/q1 + (1/q1') ... simpler: fall back to direct Fractions
        raise NotImplementedError

    # direct exact evaluation is clearer at this scale and still independent
    total = Fraction(0)
    fact = 1
    for j in range(j_max + 1):
        if j:
            fact *= j
        total += Fraction(1, fact)
    return total


# ---------------------------------------------------------------------------
# the enclosure of e


def test_e_enclosure_contains_published_digits():
    enc = e_enclosure(64)
    assert enc.contains(E_100)
    assert float(enc.width()) <= 2.0 ** (1 - 64)


def test_e_enclosure_16_bits():
    enc = e_enclosure(16)
    assert float(enc.width()) <= 2.0**-15
    assert enc.contains(E_100)
    assert float(enc.lower) == pytest.approx(2.71828, abs=2e-5)


def test_e_enclosure_coarse_sanity():
    for bits in (16, 32, 64, 128, 256):
        enc = e_enclosure(bits)
        assert enc.lower > 2.5 and enc.upper < 3
    with pytest.raises(ValueError):
        e_enclosure(8)


def test_series_bounds_match_direct_partial_sum():
    lo, hi = _e_series_bounds(64)
    # reconstruct J from the returned denominator and compare exactly
    j = 1
    fact = 1
    while fact * (j + 1) < 2 * 2**65:
        j += 1
        fact *= j
    assert lo == mpq(
        binary_split_partial_sum(j).numerator, binary_split_partial_sum(j).denominator
    )
    assert hi - lo == mpq(2, fact * (j + 1))
    assert lo < mpq(E_100.numerator, E_100.denominator) < hi


# ---------------------------------------------------------------------------
# convergents


def test_convergents_small():
    assert e_convergents(10) == [(8, 3), (11, 4), (19, 7)]
    got = e_convergents(100)
    assert (193, 71) in got and got[-1] == (193, 71)
    with pytest.raises(ValueError):
        e_convergents(1)


def test_convergents_dirichlet_property():
    for m, n in e_convergents(10**6):
        assert abs(E_100 - Fraction(m, n)) < Fraction(1, n * n)
        assert n > 1


def test_convergents_denominators_increase():
    dens = [n for _, n in e_convergents(10**6)]
    assert dens == sorted(dens)
    assert dens[-1] <= 10**6


def test_round_e_multiple():
    assert round_e_multiple(1) == 3
    assert round_e_multiple(2) == 5
    assert round_e_multiple(7) == 19
    assert round_e_multiple(100) == 272
    for n in range(2, 300):
        assert round_e_multiple(n) == round(float(E_100) * n)


# ---------------------------------------------------------------------------
# the factorial-side inequality


def test_sondow_example_19_7():
    rec = check_sondow_inequality(19, 7)
    assert float(rec.gap.lower) == pytest.approx(4.0e-3, rel=2e-3)
    assert smarandache(7) == 7
    assert float(rec.sondow_bound.upper) == pytest.approx(1 / math.factorial(8), rel=1e-9)
    assert rec.gap.lower > rec.sondow_bound.upper


def test_sondow_example_n2():
    # the best numerator for n = 2 is round(2e) = 5, with gap about 0.2183
    rec = check_sondow_inequality(5, 2)
    assert float(rec.gap.lower) == pytest.approx(abs(2.718281828459045 - 2.5), rel=1e-9)
    assert float(rec.sondow_bound.upper) == pytest.approx(1 / 6, rel=1e-9)
    # a worse numerator satisfies the bound a fortiori
    rec3 = check_sondow_inequality(3, 2)
    assert float(rec3.gap.lower) == pytest.approx(2.718281828459045 - 1.5, rel=1e-9)


def test_sondow_huge_denominator():
    n = 10**24
    m = 2718281828459045235360287  # round(e * 10^24)
    assert round_e_multiple(n) == m
    assert smarandache(n) == 100
    rec = check_sondow_inequality(m, n)
    assert rec.gap.lower > rec.sondow_bound.upper
    # gap is about 4.7e-25; the bound 1/101! is astronomically smaller
    assert float(rec.gap.upper) < 1e-24


def test_sondow_rejects_bad_n():
    with pytest.raises(ValueError):
        check_sondow_inequality(3, 1)
    with pytest.raises(ValueError):
        check_sondow_inequality(3, 2, epsilon=Fraction(-1, 2))


def test_approx_record_enforces_theorem():
    rec = check_sondow_inequality(19, 7)
    with pytest.raises(ValueError):
        ApproxRecord(
            m=19,
            n=7,
            gap=rec.sondow_bound,  # deliberately inverted
            sondow_bound=rec.gap,
            dirichlet_bound=rec.dirichlet_bound,
            epsilon=Fraction(0),
        )


def test_sondow_csv_row():
    rec = check_sondow_inequality(19, 7)
    fields = rec.csv_row().split(",")
    assert fields[0] == "19" and fields[1] == "7"
    assert fields[6] == "0" and fields[7] == "1"
    assert fields[8] == "dirichlet"
    assert float(fields[2]) <= float(fields[3])


# ---------------------------------------------------------------------------
# strength comparison of the two bounds


def test_compare_bounds_examples():
    assert compare_bounds(7) is Cmp.LT  # 8! = 40320 > 49
    assert stronger_side(compare_bounds(7)) == "dirichlet"
    assert compare_bounds(2) is Cmp.LT  # 3! = 6 > 4
    # primorial 210 = 2*3*5*7: 8! = 40320 <= 210^2 = 44100, factorial side wins
    assert compare_bounds(210) is Cmp.GT
    assert stronger_side(compare_bounds(210)) == "sondow"


def test_compare_bounds_with_epsilon():
    # raising epsilon only weakens the exponent side: at n = 210 the
    # factorial side already wins at epsilon = 0 and keeps winning,
    # exactly because (8!)^2 = 40320^2 < 210^5
    assert math.factorial(8) ** 2 < 210**5
    assert compare_bounds(210, epsilon=Fraction(1, 2)) is Cmp.GT
    # at n = 7 the exponent side wins for epsilon = 0 but loses once
    # n^(2+eps) passes 8! = 40320: 7^(2+eps) > 40320 needs eps > 3.45
    assert compare_bounds(7, epsilon=Fraction(7, 2)) is Cmp.GT
    assert compare_bounds(7, epsilon=Fraction(3, 1)) is Cmp.LT


def test_compare_bounds_oracle():
    table = build_table(2000)
    for n in range(2, 2001):
        s = smarandache(n)
        lhs = math.factorial(s + 1)
        expected = Cmp.LT if lhs > n * n else Cmp.GT if lhs < n * n else Cmp.EQ
        assert compare_bounds(n, table=table) is expected


def test_count_sondow_not_weaker():
    table = build_table(2000)
    expected = sum(
        1 for n in range(2, 2001) if math.factorial(smarandache(n) + 1) <= n * n
    )
    assert count_sondow_not_weaker(2000, table=table) == expected


def test_sondow_side_density_vanishes():
    # the set where the factorial-side bound is at least as strong thins
    # out: density falls through the whole sweep
    table = build_table(10**6)
    densities = [
        count_sondow_not_weaker(x, table=table) / x for x in (10**4, 10**5, 10**6)
    ]
    print("factorial-side-not-weaker densities:", densities)
    assert densities[0] > densities[1] > densities[2]


def test_precision_cap_raises_indeterminate():
    # a convergent with denominator near 1e10 has a gap around 2^-70,
    # far below what a 64-bit enclosure can separate
    m, n = e_convergents(10**10)[-1]
    assert n > 10**9
    with pytest.raises(IndeterminateComparisonError):
        check_sondow_inequality(m, n, precision_cap_bits=64)
    # the same comparison resolves once the cap allows escalation
    rec = check_sondow_inequality(m, n)
    assert rec.gap.lower > rec.sondow_bound.upper
