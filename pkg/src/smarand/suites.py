"""Named desk-scale verification suites behind the `verify` command.

Each suite runs a fixed battery of exact or certified checks and yields
deterministic rows, so repeated runs (at any parallelism) emit identical
CSV bytes.  Scales are chosen to finish in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List

from .arith import ExponentK
from .asymptotics import (
    shape_ratio,
    theorem2_diagnostic,
    verify_eq5_range,
)
from .census import (
    case_i_set,
    count_M,
    count_Nk,
    count_Nk_by_divisors,
    count_S_neq_P,
    m_witnesses,
    nk_witnesses,
    psi_smooth_count,
)
from .enclosure import ceil_certified, floor_certified, log_enclosure
from .irrationality import (
    check_sondow_inequality,
    e_convergents,
    round_e_multiple,
)
from .logfact import lemma_bracket_violations
from .smarandache import SmarandacheTable, build_table, smarandache

__all__ = ["SUITE_CSV_HEADER", "SUITE_NAMES", "SuiteCheck", "run_suite", "run_suites"]

SUITE_CSV_HEADER = "suite,check,detail,status"

# The sporadic S = P <= 5 set; twelve integers, frozen by direct scan.
_SPORADIC = [1, 2, 3, 5, 6, 10, 15, 20, 30, 40, 60, 120]


@dataclass(frozen=True)
class SuiteCheck:
    suite: str
    check: str
    detail: str
    ok: bool

    def csv_row(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.suite},{self.check},{self.detail},{status}"


def _chk(suite: str, check: str, ok: bool, detail: str) -> SuiteCheck:
    return SuiteCheck(suite=suite, check=check, detail=detail, ok=ok)


def suite_lemma2(threads: int = 1, n_max: int = 100_000) -> List[SuiteCheck]:
    bad = lemma_bracket_violations(n_max)
    return [
        _chk(
            "lemma2",
            "factorial-log-bracket",
            not bad,
            f"n<=%d;violations=%d" % (n_max, len(bad)),
        )
    ]


def suite_case_i(threads: int = 1) -> List[SuiteCheck]:
    got = case_i_set()
    checks = [
        _chk("case-i", "set-equality", got == _SPORADIC, "got=" + " ".join(map(str, got))),
        _chk("case-i", "cardinality", len(got) == 12, f"count={len(got)}"),
    ]
    excluded = [d for d in range(1, 121) if 120 % d == 0 and d not in got]
    comp_ok = excluded == [4, 8, 12, 24] and all(smarandache(d) == 4 for d in excluded)
    checks.append(
        _chk("case-i", "excluded-divisors", comp_ok, "excluded=" + " ".join(map(str, excluded)))
    )
    return checks


def suite_eq5(threads: int = 1, p_min: int = 7, p_max: int = 10_000) -> List[SuiteCheck]:
    bad = verify_eq5_range(p_min, p_max)
    return [
        _chk(
            "eq5",
            "chain",
            not bad,
            f"P={p_min}..{p_max};violations={len(bad)}",
        )
    ]


def suite_thm1(threads: int = 1) -> List[SuiteCheck]:
    k = ExponentK(2, 1)
    xs = (10**3, 10**4, 10**5)
    checks: List[SuiteCheck] = []
    counts = {}
    for x in xs:
        rep = count_Nk_by_divisors(x, k)
        counts[x] = rep.count
        parts_sum = sum(p.count for p in rep.parts)
        checks.append(
            _chk(
                "thm1",
                f"decomposition-x={x}",
                rep.count == parts_sum,
                f"count={rep.count};parts={parts_sum}",
            )
        )
    ratios = [shape_ratio(counts[x], x) for x in xs]
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    checks.append(
        _chk(
            "thm1",
            "shape-ratio-increasing",
            increasing and all(r > 0 for r in ratios),
            "ratios=" + " ".join(f"{r:.15g}" for r in ratios),
        )
    )
    # table-backed checks at the middle scale
    x = 10**4
    table = build_table(x)
    rep_tab = count_Nk(x, k, table, threads=threads)
    checks.append(
        _chk(
            "thm1",
            f"cross-method-x={x}",
            rep_tab.count == counts[x],
            f"table={rep_tab.count};divisors={counts[x]}",
        )
    )
    n_report = count_S_neq_P(x, table, threads=threads)
    nk1 = rep_tab.parts[0].count
    checks.append(
        _chk(
            "thm1",
            f"nk1-below-N-x={x}",
            nk1 <= n_report.count,
            f"nk1={nk1};N={n_report.count}",
        )
    )
    # counted n with S = P and P >= 7 obey P <= k log x, and the S = P
    # part stays below 12 + Psi(x, floor(k log x))
    klogx_floor = floor_certified(
        lambda bits: log_enclosure(x, bits) * k.fraction, what="floor(k log x)"
    )
    wits = nk_witnesses(x, k, table)
    eq2_wits = [n for n in wits.values if table.s(n) == table.p(n)]
    bad_p = [
        n for n in eq2_wits if table.p(n) >= 7 and table.p(n) > klogx_floor
    ]
    checks.append(
        _chk(
            "thm1",
            f"eq5-witness-bound-x={x}",
            not bad_p,
            f"witnesses={len(eq2_wits)};violations={len(bad_p)}",
        )
    )
    psi = psi_smooth_count(x, klogx_floor, table, threads=threads)
    nk2 = rep_tab.parts[1].count
    checks.append(
        _chk(
            "thm1",
            f"eq6-shape-x={x}",
            nk2 <= 12 + psi.count,
            f"nk2={nk2};bound={12 + psi.count}",
        )
    )
    return checks


def suite_thm2(threads: int = 1) -> List[SuiteCheck]:
    xs = (10**3, 10**4)
    table = build_table(max(xs))
    checks: List[SuiteCheck] = []
    for x in xs:
        diag = theorem2_diagnostic(x, table)
        ratio = diag.count_to_bound_ratio
        checks.append(
            _chk(
                "thm2",
                f"ratio-x={x}",
                0 < ratio < 10,
                f"M={diag.exact_count};ratio={ratio:.15g}",
            )
        )
        wits = m_witnesses(x, table)
        total = count_M(x, table).count
        neq = sum(1 for n in wits.values if table.s(n) != table.p(n))
        checks.append(
            _chk(
                "thm2",
                f"decomposition-x={x}",
                not wits.truncated and neq + (total - neq) == total,
                f"M={total};Sneq={neq};Seq={total - neq}",
            )
        )
        # witnesses with P >= 7 sit below x^(1/log log x); the census stays
        # below 12 + Psi at the ceiling of that smoothness level
        power_ceil = ceil_certified(
            lambda bits: (
                log_enclosure(x, bits) / log_enclosure(x, bits).log()
            ).exp(),
            what="ceil(x^(1/log log x))",
        )
        bad = [n for n in wits.values if table.p(n) >= 7 and table.p(n) > power_ceil]
        psi = psi_smooth_count(x, max(power_ceil, 2), table, threads=threads)
        checks.append(
            _chk(
                "thm2",
                f"smoothness-bound-x={x}",
                not bad and total <= 12 + psi.count,
                f"violations={len(bad)};M={total};bound={12 + psi.count}",
            )
        )
    return checks


def suite_sondow_e(threads: int = 1, n_max: int = 10_000, conv_max: int = 10**6) -> List[SuiteCheck]:
    table = build_table(n_max)
    checks: List[SuiteCheck] = []
    violations = 0
    checked = 0
    for n in range(2, n_max + 1):
        m = round_e_multiple(n)
        try:
            check_sondow_inequality(m, n, table=table)
        except (RuntimeError, ValueError):
            violations += 1
        checked += 1
    checks.append(
        _chk(
            "sondow-e",
            "rounded-numerators",
            violations == 0,
            f"n=2..{n_max};checked={checked};violations={violations}",
        )
    )
    convs = e_convergents(conv_max)
    conv_violations = 0
    for m, n in convs:
        try:
            check_sondow_inequality(m, n)
        except (RuntimeError, ValueError):
            conv_violations += 1
    known = {(8, 3), (19, 7), (193, 71)}
    checks.append(
        _chk(
            "sondow-e",
            "convergents",
            conv_violations == 0 and known <= set(convs),
            f"denominator<=%d;count=%d;violations=%d" % (conv_max, len(convs), conv_violations),
        )
    )
    return checks


_SUITES: Dict[str, Callable[..., List[SuiteCheck]]] = {
    "lemma2": suite_lemma2,
    "case-i": suite_case_i,
    "eq5": suite_eq5,
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "sondow-e": suite_sondow_e,
}

SUITE_NAMES = tuple(_SUITES) + ("all",)


def run_suite(name: str, threads: int = 1) -> List[SuiteCheck]:
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    return _SUITES[name](threads=threads)


def run_suites(name: str, threads: int = 1) -> List[SuiteCheck]:
    """Run one suite, or every suite in declaration order for 'all'."""
    if name == "all":
        out: List[SuiteCheck] = []
        for suite in _SUITES:
            out.extend(run_suite(suite, threads=threads))
        return out
    return run_suite(name, threads=threads)
