"""Weighted prime races, the tau bias series, and sign-set densities.

Series here are piecewise constant in x with jumps at primes, so sign-set
measures are exact interval sums, not sampled estimates.  Membership in a
positivity set uses strict "> 0"; stretches at exactly zero belong to
neither sign and are reported as zero touches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DensityDomainError, GridError, InvalidRangeError
from .families import DeltaFamily
from .grids import geometric_grid
from .primes import PrimeTable, sieve_range
from .summation import fixed_sum
from .tau import TauTable


@dataclass(frozen=True)
class StepSeries:
    """Cumulative value after each breakpoint; 0 before the first."""

    breakpoints: np.ndarray  # ascending prime abscissae
    values: np.ndarray       # same length; int64 or float64
    x_max: float

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values):
            raise ValueError("breakpoints and values must align")

    def value_at(self, x: float):
        idx = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        if idx < 0:
            return self.values.dtype.type(0)
        return self.values[idx]


@dataclass(frozen=True)
class Crossing:
    x: float
    zero_touch: bool


@dataclass(frozen=True)
class DensityReport:
    X: float
    natural_density: float
    log_density: float
    crossings: list  # strict sign-change abscissae
    positive_measure: float


def _primes_to(x: float, table: PrimeTable | None) -> np.ndarray:
    if table is None:
        table = sieve_range(2, int(x))
    elif table.hi < x:
        raise InvalidRangeError(f"prime table ends at {table.hi}, need {x}")
    return table.upto(x)


def weighted_pi(
    x: float, q: int, a: int, s: float, *, table: PrimeTable | None = None
) -> float:
    """Sum of p^{-s} over primes p <= x with p = a mod q; s = 0 counts."""
    if s < 0:
        raise InvalidRangeError(f"s={s} < 0")
    if q < 1:
        raise InvalidRangeError(f"q={q} < 1")
    primes = _primes_to(x, table)
    cls = primes[primes % q == a % q]
    if s == 0:
        return float(len(cls))
    return fixed_sum(cls.astype(np.float64) ** (-s))


def char_bias_series(
    X: float, s: float, *, table: PrimeTable | None = None
) -> StepSeries:
    """D_s(x) = pi_s(x;4,3) - pi_s(x;4,1) with breakpoints at odd primes."""
    if s < 0:
        raise InvalidRangeError(f"s={s} < 0")
    primes = _primes_to(X, table)
    odd = primes[primes > 2]
    sign = np.where(odd % 4 == 3, 1, -1)
    if s == 0:
        values = np.cumsum(sign.astype(np.int64))
    else:
        jumps = sign * odd.astype(np.float64) ** (-s)
        values = np.cumsum(jumps)
    return StepSeries(odd, values, float(X))


def tau_bias_series(
    X: float, table: TauTable, *, ptable: PrimeTable | None = None
) -> StepSeries:
    """T(x) = sum_{p<=x} tau(p)/p^6, each term correctly rounded from the
    exact rational (identical to lambda(p)/sqrt(p) up to rounding)."""
    primes = _primes_to(X, ptable)
    if len(primes) and int(primes[-1]) > table.N:
        raise InvalidRangeError(f"tau table N={table.N} below {int(primes[-1])}")
    vals = table.values
    terms = np.array([vals[p] / p**6 for p in primes.tolist()], dtype=np.float64)
    return StepSeries(primes, np.cumsum(terms), float(X))


def sarnak_statistic(
    X: float,
    sample_grid,
    table: TauTable,
    *,
    ptable: PrimeTable | None = None,
) -> list[tuple[float, float]]:
    """Samples of (log x / sqrt x) * sum_{p<=x} tau(p) p^{-11/2}."""
    primes = _primes_to(X, ptable)
    fam = DeltaFamily("delta", 2, -1, frozenset(), table)
    lam = fam.lambda_array(primes)
    cum = np.cumsum(lam)
    out = []
    for x in sample_grid:
        if x > X:
            raise InvalidRangeError(f"grid point {x} beyond X={X}")
        idx = int(np.searchsorted(primes, x, side="right")) - 1
        s_val = float(cum[idx]) if idx >= 0 else 0.0
        out.append((float(x), math.log(x) / math.sqrt(x) * s_val))
    return out


def crossings(series: StepSeries) -> list[Crossing]:
    """Sign boundaries along the series, in order.

    A strict change (+ to - or - to +, possibly across zeros) is a
    crossing; an exact zero value is reported as a zero touch.
    """
    out = []
    last_nonzero = 0
    vals = series.values
    sgn = np.sign(vals)
    for b, s in zip(series.breakpoints.tolist(), sgn.tolist()):
        s = int(s)
        if s == 0:
            out.append(Crossing(float(b), True))
            continue
        if last_nonzero and s == -last_nonzero:
            out.append(Crossing(float(b), False))
        last_nonzero = s
    return out


def densities(series: StepSeries, X: float) -> DensityReport:
    """Natural and logarithmic density of {t in [2, X] : series(t) > 0}.

    Exact piecewise integration; the logarithmic weight dt/t is
    normalized by its full mass log(X/2) so a constant-positive series
    has density exactly 1 under both measures.
    """
    if X < 2:
        raise DensityDomainError(f"X={X} < 2")
    if X > series.x_max:
        raise DensityDomainError(f"X={X} beyond series domain {series.x_max}")
    n = int(np.searchsorted(series.breakpoints, X, side="right"))
    edges = np.concatenate(
        [[2.0], series.breakpoints[:n].astype(np.float64), [float(X)]]
    )
    edges = np.maximum(edges, 2.0)  # breakpoint 2 folds into the left end
    vals = np.concatenate([[0.0], np.asarray(series.values[:n], dtype=np.float64)])
    pos = vals > 0.0
    widths = np.diff(edges)
    positive_measure = float(np.sum(widths[pos]))
    log_widths = np.diff(np.log(edges))
    log_measure = float(np.sum(log_widths[pos]))
    return DensityReport(
        X=float(X),
        natural_density=positive_measure / (X - 2.0) if X > 2 else 0.0,
        log_density=log_measure / math.log(X / 2.0) if X > 2 else 0.0,
        crossings=[c.x for c in crossings(series) if not c.zero_touch],
        positive_measure=positive_measure,
    )


def loglog_ratio(
    series: StepSeries, x_max: float, sign: int = 1, grid=None
) -> list[tuple[float, float]]:
    """Samples of series(x) / ((sign/2) log log x) over a grid with x >= 16."""
    if sign not in (1, -1):
        raise InvalidRangeError("sign must be +1 or -1")
    if grid is None:
        grid = geometric_grid(16.0, stop=float(x_max))
    grid = np.asarray(list(grid), dtype=np.float64)
    if len(grid) == 0 or grid.min() < 16.0:
        raise GridError("loglog_ratio grid must stay in x >= 16")
    if grid.max() > series.x_max:
        raise GridError(f"grid beyond series domain {series.x_max}")
    out = []
    for x in grid:
        denom = 0.5 * sign * math.log(math.log(x))
        out.append((float(x), float(series.value_at(x)) / denom))
    return out
