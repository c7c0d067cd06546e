"""Finite Euler product of zeta on the critical line and its renormalizer.

The renormalizing factor is exp of the epsilon-limit
    lim_{eps->0} ( int_{1+eps}^x du / (u^{s0} log u) - log(1/eps) ),
which the substitution u = e^t turns into F((1 - s0) log x) + log log x
with F(z) = int_0^z (e^t - 1)/t dt entire: the log(1/eps) counterterm is
exactly the logarithmic divergence at u = 1.  The closed form is cross-
checked against direct adaptive quadrature before trusting it anywhere.

Products are evaluated as exp of a compensated complex log-sum with the
principal branch per factor; |p^{-s0}| = p^{-1/2} < 1 keeps every factor
off the cut, and exponentiation at the end absorbs any accumulated
winding of the sum itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRangeError, NormalizerValidationError
from .primes import PrimeTable, chebyshev_psi, sieve_range
from .special import entire_expint
from .summation import fixed_complex_sum


@dataclass(frozen=True)
class CriticalPoint:
    tau0: float
    m: int = 0  # declared zero order at s0; external knowledge, never computed

    @property
    def s0(self) -> complex:
        return complex(0.5, self.tau0)


@dataclass(frozen=True)
class RatioSample:
    x: float
    finite_product: complex
    normalizer: complex
    ratio: complex  # (log x)^m * finite_product / normalizer


def _require_critical(s0: complex) -> complex:
    s0 = complex(s0)
    if s0.real != 0.5:
        raise InvalidRangeError(f"Re(s0)={s0.real} must be exactly 1/2")
    return s0


def _primes_to(x: float, table: PrimeTable | None) -> np.ndarray:
    if table is None:
        table = sieve_range(2, int(x))
    elif table.hi < x:
        raise InvalidRangeError(f"prime table ends at {table.hi}, need {x}")
    return table.upto(x)


def finite_zeta_log(
    x: float, s0: complex, *, table: PrimeTable | None = None, threads: int = 1
) -> complex:
    """Compensated sum of -log(1 - p^{-s0}) over primes p <= x."""
    s0 = _require_critical(s0)
    primes = _primes_to(x, table).astype(np.float64)
    if len(primes) == 0:
        return 0.0 + 0.0j
    z = np.exp(-s0 * np.log(primes))
    return fixed_complex_sum(-np.log(1.0 - z), threads=threads)


def finite_zeta(
    x: float,
    s0: complex,
    *,
    table: PrimeTable | None = None,
    threads: int = 1,
    direct: bool = False,
) -> complex:
    """prod_{p<=x} (1 - p^{-s0})^{-1} on the critical line.

    direct=True multiplies the factors sequentially instead (the two-path
    consistency check for moderate x).
    """
    s0 = _require_critical(s0)
    if direct:
        primes = _primes_to(x, table).astype(np.float64)
        out = 1.0 + 0.0j
        for p in primes:
            out /= 1.0 - complex(p) ** (-s0)
        return out
    return cmath.exp(finite_zeta_log(x, s0, table=table, threads=threads))


def log_normalizer(x: float, s0: complex) -> complex:
    """Closed form of the epsilon-limit in log space."""
    s0 = _require_critical(s0)
    if x <= 1.0:
        raise InvalidRangeError(f"x={x} must exceed 1")
    big_l = math.log(x)
    return entire_expint((1.0 - s0) * big_l) + math.log(big_l)


def normalizer(x: float, s0: complex) -> complex:
    return cmath.exp(log_normalizer(x, s0))


def quadrature_normalizer_log(x: float, s0: complex, eps: float) -> complex:
    """Oracle: adaptive integration on [1+eps, x] minus log(1/eps)."""
    from scipy.integrate import quad

    s0 = _require_critical(s0)

    def integrand_re(u: float) -> float:
        return (u ** (-s0) / math.log(u)).real

    def integrand_im(u: float) -> float:
        return (u ** (-s0) / math.log(u)).imag

    re, _ = quad(integrand_re, 1.0 + eps, x, limit=800)
    im, _ = quad(integrand_im, 1.0 + eps, x, limit=800)
    return complex(re, im) - math.log(1.0 / eps)


def quadrature_normalizer_extrapolated(
    x: float, s0: complex, eps_pair: tuple[float, float] = (1e-4, 1e-6)
) -> complex:
    """Two-epsilon Richardson limit of the quadrature oracle.

    The integral minus the counterterm is C + c1 eps + O(eps^2), so two
    epsilon values pin C to ~eps_small^2.
    """
    e1, e2 = eps_pair
    q1 = quadrature_normalizer_log(x, s0, e1)
    q2 = quadrature_normalizer_log(x, s0, e2)
    return q2 + (q2 - q1) * (e2 / (e1 - e2))


def validate_normalizer(x: float, s0: complex, tol: float = 1e-6) -> float:
    """|closed form - extrapolated quadrature|; raises beyond `tol`."""
    closed = log_normalizer(x, s0)
    oracle = quadrature_normalizer_extrapolated(x, s0)
    dev = abs(closed - oracle)
    if dev > tol:
        raise NormalizerValidationError(
            f"normalizer mismatch {dev:.3e} at x={x}, s0={s0}"
        )
    return dev


def akatsuka_ratio(
    x_grid,
    point: CriticalPoint,
    *,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> list[RatioSample]:
    """Ratio samples (log x)^m zeta_x(s0) / normalizer along the grid.

    Computed in log space, so the ratio stays finite even where the
    finite product itself brushes the float range.
    """
    s0 = point.s0
    grid = sorted(float(x) for x in x_grid)
    if grid and grid[0] <= 1.0:
        raise InvalidRangeError("grid must stay in x > 1")
    if table is None and grid:
        table = sieve_range(2, int(grid[-1]))
    out = []
    for x in grid:
        zeta_log = finite_zeta_log(x, s0, table=table, threads=threads)
        norm_log = log_normalizer(x, s0)
        ratio_log = point.m * cmath.log(math.log(x)) + zeta_log - norm_log
        out.append(
            RatioSample(
                x=x,
                finite_product=cmath.exp(zeta_log),
                normalizer=cmath.exp(norm_log),
                ratio=cmath.exp(ratio_log),
            )
        )
    return out


def oscillation_band(samples: list[RatioSample]) -> tuple[float, float]:
    """(min, max) of |ratio| over the trailing half of the grid."""
    if not samples:
        raise InvalidRangeError("no samples")
    tail = samples[len(samples) // 2 :]
    mags = [abs(s.ratio) for s in tail]
    return min(mags), max(mags)


def psi_error_diag(
    x_grid, *, table: PrimeTable | None = None, threads: int = 1
) -> list[tuple[float, float]]:
    """Samples of (psi(x) - x) / (sqrt(x) log x) along the grid."""
    grid = sorted(float(x) for x in x_grid)
    if grid and grid[0] < 2:
        raise InvalidRangeError("grid must stay in x >= 2")
    if table is None and grid:
        table = sieve_range(2, int(grid[-1]))
    out = []
    for x in grid:
        psi = chebyshev_psi(int(x), table=table, threads=threads)
        out.append((x, (psi - x) / (math.sqrt(x) * math.log(x))))
    return out
