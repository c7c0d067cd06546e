"""Independent brute-force oracles.

Everything here deliberately avoids the package's own code paths: the
tau oracle multiplies out the defining product term by term, the sieve
oracle is a plain boolean list, psi walks every integer.  Slow on
purpose; used to freeze expected values.
"""

from __future__ import annotations

import math

import numpy as np


def naive_tau(n_max: int) -> list[int]:
    """tau(1..n_max) from the 24th power of the defining product.

    Multiplies the truncated polynomial by (1 - q^k) twenty-four times
    for each k; O(n_max^2) exact integer work.  Returns a 1-indexed list
    with a zero sentinel at index 0.
    """
    poly = np.zeros(n_max, dtype=object)
    poly[0] = 1
    for k in range(1, n_max):
        for _ in range(24):
            poly[k:] = poly[k:] - poly[: n_max - k]
    return [0] + list(poly)


def naive_prime_list(limit: int) -> list[int]:
    """Plain pure-python sieve, no segmentation, no numpy tricks."""
    flags = [True] * (limit + 1)
    flags[0:2] = [False, False]
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            for j in range(i * i, limit + 1, i):
                flags[j] = False
    return [i for i, f in enumerate(flags) if f]


def trial_division_primes(lo: int, hi: int) -> list[int]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        if all(n % d for d in range(2, int(n**0.5) + 1)):
            out.append(n)
    return out


def schoolbook_convolve(a, b, modulus: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % modulus
    return out


def naive_mangoldt(n: int) -> float:
    """log p if n = p^k, else 0; by explicit factorization."""
    if n < 2:
        return 0.0
    factors = set()
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    return math.log(next(iter(factors))) if len(factors) == 1 else 0.0


def naive_psi(x: int, chi=None) -> float:
    """Direct sum of chi(n) Lambda(n) over n <= x."""
    total = 0.0
    for n in range(1, x + 1):
        lam = naive_mangoldt(n)
        if lam:
            total += lam * (chi(n) if chi is not None else 1)
    return total


def expint_quadrature(z: complex) -> complex:
    """F(z) = int_0^1 (e^(z u) - 1)/u du by adaptive quadrature."""
    from scipy.integrate import quad

    def f_re(u):
        return ((np.exp(z * u) - 1.0) / u).real if u > 0 else z.real

    def f_im(u):
        return ((np.exp(z * u) - 1.0) / u).imag if u > 0 else z.imag

    re, _ = quad(f_re, 0.0, 1.0, limit=800)
    im, _ = quad(f_im, 0.0, 1.0, limit=800)
    return complex(re, im)
