"""Special-function kernels: incomplete gamma two ways, an entire
exponential-integral variant, and series-acceleration utilities.

Everything here is double precision with explicit regime switches; the
switch points are pinned by the dual-route tests (series vs continued
fraction, closed form vs quadrature) rather than taken on faith.
"""

from __future__ import annotations

import cmath
import math

EULER_GAMMA = 0.5772156649015328606065120900824024

_EXPINT_SERIES_RADIUS = 25.0  # tuned by the quadrature cross-check


def entire_expint(z: complex) -> complex:
    """F(z) = integral_0^z (e^t - 1)/t dt, entire in z.

    Taylor series inside |z| <= 25; beyond that the Ei-style asymptotic
    F(z) = -gamma - log z + e^z sum_k k!/z^{k+1} (optimally truncated)
    with the Stokes term i*pi*sign(Im z).  Only Re(z) > 0 or moderate
    |z| is exercised by callers; accuracy there is ~1e-9 absolute or
    better.
    """
    z = complex(z)
    if z == 0:
        return 0.0 + 0.0j
    if abs(z) <= _EXPINT_SERIES_RADIUS:
        term = complex(1.0)
        total = complex(0.0)
        for k in range(1, 1000):
            term *= z / k
            add = term / k
            total += add
            if abs(add) < 1e-20 * max(1.0, abs(total)):
                break
        return total
    # asymptotic branch
    t = 1.0 / z
    s = t
    for k in range(1, int(abs(z))):
        t *= k / z
        s += t
    stokes = 0.0 + 0.0j
    if z.imag > 0:
        stokes = 1j * math.pi
    elif z.imag < 0:
        stokes = -1j * math.pi
    return -EULER_GAMMA - cmath.log(z) + cmath.exp(z) * s + stokes


def upper_gamma_series(a: float, x: float) -> float:
    """Gamma(a, x) = Gamma(a) - gamma(a, x) with the lower-gamma series.

    Reliable for x < a + 1; loses relative accuracy when x >> a because
    of the subtraction.
    """
    if x < 0:
        raise ValueError("x >= 0 required")
    if x == 0:
        return math.gamma(a)
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(10000):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    lower = math.exp(-x + a * math.log(x)) * total
    return math.gamma(a) - lower


def upper_gamma_cf(a: float, x: float) -> float:
    """Gamma(a, x) by the Legendre continued fraction (modified Lentz).

    Reliable for x > 0; the usual choice for x >= a + 1.
    """
    if x <= 0:
        raise ValueError("x > 0 required")
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(-x + a * math.log(x)) * h


def upper_gamma(a: float, x: float) -> float:
    """Incomplete gamma with the standard regime switch at x = a + 1."""
    if x < a + 1.0:
        return upper_gamma_series(a, x)
    return upper_gamma_cf(a, x)


def averaged_alternating_sum(term, depth: int = 48, start: int = 16) -> float:
    """Accelerated value of sum_{n>=0} (-1)^n term(n), term > 0 decreasing.

    Takes partial sums S_start .. S_{start+depth} and averages adjacent
    entries down to a single value; each averaging round roughly halves
    the remaining error for smooth terms.
    """
    if depth < 1 or start < 0:
        raise ValueError("depth >= 1 and start >= 0 required")
    n_partials = start + depth + 1
    s = 0.0
    partials = []
    for n in range(n_partials):
        s += term(n) if n % 2 == 0 else -term(n)
        partials.append(s)
    row = partials[start:]
    while len(row) > 1:
        row = [(u + v) / 2.0 for u, v in zip(row, row[1:])]
    return row[0]


def richardson_root_extrapolate(
    samples, step_ratio: float = 2.0, first_exponent: float = 0.5
) -> tuple[float, float]:
    """Limit of f(N_k) = L + sum_j c_j N_k^{-(first_exponent + j)}.

    samples are f at N, rN, r^2 N, ...; powers are eliminated one per
    level.  Returns (limit, spread of the last elimination level) so the
    caller can report an error estimate.
    """
    vals = list(samples)
    if len(vals) < 2:
        raise ValueError("need at least two samples")
    exponent = first_exponent
    last_spread = math.inf
    while len(vals) > 1:
        f = step_ratio**exponent
        vals = [(f * vals[k + 1] - vals[k]) / (f - 1.0) for k in range(len(vals) - 1)]
        if len(vals) > 1:
            last_spread = max(vals) - min(vals)
        exponent += 1.0
    return vals[0], last_spread
