"""Partial Euler products at the central point and their log decomposition.

The running log-product over p <= x splits exactly into
    I(x)   = sum_p tr(M(p)) / sqrt(p)
    II(x)  = (1/2) sum_p tr(M(p)^2) / p
    III(x) = sum_{k>=3} (1/k) sum_p tr(M(p)^k) / p^{k/2}
and the identity I + II + III = log prod_p det(1 - M(p) p^{-1/2})^{-1}
is this module's central correctness check.  The k-sum in III truncates
once p^{-k/2} drops below 1e-18, with the geometric tail bound carried
alongside the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TableTooSmallError
from .families import CharacterFamily, DeltaFamily, UnitaryFamily
from .lvalues import LValue, lvalue_chi4_center, lvalue_delta_center
from .primes import PrimeTable, sieve_range
from .summation import checkpoint_sums, fixed_sum

K_TRUNCATION_EPS = 1e-18


@dataclass(frozen=True)
class ProductTrace:
    family: str
    grid: np.ndarray        # ascending checkpoints
    log_values: np.ndarray  # log partial product at the last prime <= checkpoint


@dataclass(frozen=True)
class Decomposition:
    x: float
    I: float
    II: float
    III: float
    iii_tail: float  # geometric bound on the truncated k-tail


def _primes_to(x: float, table: PrimeTable | None) -> np.ndarray:
    if table is None:
        table = sieve_range(2, int(x))
    elif table.hi < x:
        raise TableTooSmallError(f"prime table ends at {table.hi}, need {x}")
    return table.upto(x)


def _check_family_coverage(family: UnitaryFamily, primes: np.ndarray) -> None:
    if isinstance(family, DeltaFamily) and len(primes):
        if int(primes[-1]) > family.table.N:
            raise TableTooSmallError(
                f"tau table N={family.table.N} below prime {int(primes[-1])}"
            )


def log_factor_terms(family: UnitaryFamily, primes: np.ndarray) -> np.ndarray:
    """-log det(1 - M(p) p^{-1/2}) per prime, vectorized."""
    _check_family_coverage(family, primes)
    pf = primes.astype(np.float64)
    rsqrt = 1.0 / np.sqrt(pf)
    if isinstance(family, CharacterFamily):
        chi = family.chi.on_array(primes).astype(np.float64)
        return -np.log1p(-chi * rsqrt)
    lam = family.lambda_array(primes)
    return -np.log(1.0 - lam * rsqrt + 1.0 / pf)


def partial_product_log(
    family: UnitaryFamily,
    x: float,
    checkpoints=None,
    *,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> ProductTrace:
    """Running log of the partial Euler product at s = 1/2.

    Checkpoints need not be primes; each reported value is the sum over
    primes <= checkpoint, reduced deterministically.
    """
    primes = _primes_to(x, table)
    if checkpoints is None:
        checkpoints = [float(x)]
    grid = np.asarray(sorted(float(c) for c in checkpoints))
    if len(grid) and grid[-1] > x:
        raise TableTooSmallError(f"checkpoint {grid[-1]} beyond x={x}")
    terms = log_factor_terms(family, primes)
    counts = np.searchsorted(primes, grid, side="right")
    values = checkpoint_sums(terms, counts.tolist(), threads=threads)
    return ProductTrace(family.label, grid, values)


def partial_product_log_at(
    family: UnitaryFamily, x: float, *, table: PrimeTable | None = None,
    threads: int = 1,
) -> float:
    trace = partial_product_log(family, x, [x], table=table, threads=threads)
    return float(trace.log_values[0])


def _third_term_data(
    family: UnitaryFamily, primes: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-prime truncated k>=3 contributions and their tail bounds."""
    pf = primes.astype(np.float64)
    sqrtp = np.sqrt(pf)
    contrib = np.zeros(len(pf))
    if isinstance(family, CharacterFamily):
        lam = None
        chi = family.chi.on_array(primes).astype(np.float64)
        chi_sq = np.abs(chi)
        t_prev = t_cur = None
    else:
        lam = family.lambda_array(primes)
        # recurrence state at k=1, k=2
        t_prev = lam.copy()
        t_cur = lam * lam - 2.0
    # advance to k=3 then iterate while any p^{-k/2} clears the cut;
    # powk[i] stays at p_i^{k/2} for the first excluded power of p_i
    powk = pf * sqrtp  # p^{3/2}
    limit = 1.0 / K_TRUNCATION_EPS
    k = 3
    active = len(pf)
    while active > 0:
        # powk is ascending on the previous active prefix, stale beyond it
        active = int(np.searchsorted(powk[:active], limit, side="right"))
        if active == 0:
            break
        if lam is None:
            tr = chi if k % 2 else chi_sq
            tr = tr[:active]
        else:
            t_prev, t_cur = t_cur, lam * t_cur - t_prev
            tr = t_cur[:active]
        contrib[:active] += tr / (k * powk[:active])
        powk[:active] *= sqrtp[:active]
        k += 1
    # per-prime geometric tail: sum_{j >= k_i} r p^{-j/2} with k_i the
    # first truncated power, i.e. powk[i] = p^{k_i/2} > 1/eps
    r = float(family.degree)
    tails = r / powk / (1.0 - 1.0 / sqrtp)
    return contrib, tails


def decompose_many(
    family: UnitaryFamily,
    checkpoints,
    *,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> list[Decomposition]:
    """Theorem-style I/II/III decompositions at several checkpoints."""
    grid = np.asarray(sorted(float(c) for c in checkpoints))
    x_max = float(grid[-1])
    primes = _primes_to(x_max, table)
    _check_family_coverage(family, primes)
    pf = primes.astype(np.float64)
    counts = np.searchsorted(primes, grid, side="right").tolist()

    first = family.trace_power_array(primes, 1) / np.sqrt(pf)
    second = 0.5 * family.trace_power_array(primes, 2) / pf
    third, tails = _third_term_data(family, primes)

    i_vals = checkpoint_sums(first, counts, threads=threads)
    ii_vals = checkpoint_sums(second, counts, threads=threads)
    iii_vals = checkpoint_sums(third, counts, threads=threads)
    tail_vals = checkpoint_sums(tails, counts, threads=threads)
    return [
        Decomposition(float(x), float(i), float(ii), float(iii), float(t))
        for x, i, ii, iii, t in zip(grid, i_vals, ii_vals, iii_vals, tail_vals)
    ]


def decompose(
    family: UnitaryFamily, x: float, *, table: PrimeTable | None = None,
    threads: int = 1,
) -> Decomposition:
    return decompose_many(family, [x], table=table, threads=threads)[0]


def drh_target(family: UnitaryFamily, lvalue: LValue | None = None) -> float:
    """sqrt(2)^delta times the central L-value of the family."""
    if lvalue is None:
        if isinstance(family, DeltaFamily):
            lvalue = lvalue_delta_center(family.table)
        elif family.label == "chi4":
            lvalue = lvalue_chi4_center()
        else:
            raise ValueError(
                f"no built-in central L-value for {family.label!r}; pass lvalue="
            )
    return math.sqrt(2.0) ** family.delta * lvalue.value


def drh_ratio(
    family: UnitaryFamily,
    x: float,
    *,
    lvalue: LValue | None = None,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> float:
    """Partial product over its conjectured limit; tends to 1 if that
    limit claim holds, and boundedness is the desk-scale proxy."""
    log_prod = partial_product_log_at(family, x, table=table, threads=threads)
    return math.exp(log_prod) / drh_target(family, lvalue)
