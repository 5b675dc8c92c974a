"""Exact-arithmetic census of the Smarandache function.

Computes S(n) (the least j with n | j!) and P(n) (the largest prime
factor) at scale, evaluates the counting functions N(x), N_k(x), M(x)
and Psi(x, y) exactly, packages bound-shape diagnostics, and certifies
the two lower bounds on |e - m/n| with directed-rounding enclosures.
"""

__version__ = "0.1.0"

from .arith import (
    Cmp,
    ExponentK,
    Factorization,
    SpfSieve,
    build_spf_sieve,
    exact_compare_factorial_power,
    factorize,
    is_prime,
    legendre_valuation,
)
from .asymptotics import (
    BoundDiagnostic,
    ivic_bound_core,
    shape_ratio,
    tenenbaum_bound_core,
    theorem1_diagnostic,
    theorem2_diagnostic,
    verify_eq5_chain,
)
from .census import (
    CensusReport,
    WitnessStream,
    case_i_set,
    count_M,
    count_Nk,
    count_Nk_by_divisors,
    count_S_neq_P,
    factorial_threshold,
    psi_smooth_count,
)
from .enclosure import Enclosure, IndeterminateComparisonError, precision_cap
from .irrationality import (
    ApproxRecord,
    check_sondow_inequality,
    compare_bounds,
    e_convergents,
    e_enclosure,
    round_e_multiple,
    stronger_side,
)
from .logfact import LogFactorialBracket, log_factorial
from .smarandache import (
    SmarandacheTable,
    build_table,
    largest_prime_factor,
    smarandache,
    smarandache_prime_power,
)

__all__ = [
    "ApproxRecord",
    "BoundDiagnostic",
    "CensusReport",
    "Cmp",
    "Enclosure",
    "ExponentK",
    "Factorization",
    "IndeterminateComparisonError",
    "LogFactorialBracket",
    "SmarandacheTable",
    "SpfSieve",
    "WitnessStream",
    "__version__",
    "build_spf_sieve",
    "build_table",
    "case_i_set",
    "check_sondow_inequality",
    "compare_bounds",
    "count_M",
    "count_Nk",
    "count_Nk_by_divisors",
    "count_S_neq_P",
    "e_convergents",
    "e_enclosure",
    "exact_compare_factorial_power",
    "factorial_threshold",
    "factorize",
    "is_prime",
    "ivic_bound_core",
    "largest_prime_factor",
    "legendre_valuation",
    "log_factorial",
    "precision_cap",
    "psi_smooth_count",
    "round_e_multiple",
    "shape_ratio",
    "smarandache",
    "smarandache_prime_power",
    "stronger_side",
    "tenenbaum_bound_core",
    "theorem1_diagnostic",
    "theorem2_diagnostic",
    "verify_eq5_chain",
]
