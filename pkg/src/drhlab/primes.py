"""Prime generation and the classical sums taken over primes.

A segmented Eratosthenes sieve produces ascending prime tables up to a
configured ceiling; on top of it sit residue-class counts, the sum of
prime reciprocals, and the Chebyshev psi function over prime powers.
Segmented and monolithic execution produce identical tables, and all
floating sums run through the fixed reduction of `summation`.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .characters import RealCharacter
from .diskio import atomic_write_bytes, decode_varints, encode_varints
from .errors import CacheCorruptError, InvalidRangeError, RangeTooLargeError
from .summation import fixed_sum

SIEVE_CEILING = 1 << 40
DEFAULT_SEGMENT = 1 << 22

_PRIME_CACHE_MAGIC = b"PRMT"
_PRIME_CACHE_VERSION = 1


@dataclass(frozen=True)
class PrimeTable:
    """Ascending primes in [lo, hi], both bounds inclusive."""

    lo: int
    hi: int
    primes: np.ndarray  # int64

    def __len__(self) -> int:
        return len(self.primes)

    def upto(self, x: float) -> np.ndarray:
        """View of the primes <= x."""
        return self.primes[: int(np.searchsorted(self.primes, x, side="right"))]


@dataclass(frozen=True)
class MangoldtValue:
    n: int
    value: float  # log p when n = p^k, else 0


def _base_sieve(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def _sieve_segment(start: int, end: int, base: np.ndarray) -> np.ndarray:
    mask = np.ones(end - start + 1, dtype=bool)
    if start <= 1:
        mask[: min(2 - start, len(mask))] = False
    for p in base:
        p = int(p)
        if p * p > end:
            break
        first = max(p * p, ((start + p - 1) // p) * p)
        if first <= end:
            mask[first - start :: p] = False
    return np.nonzero(mask)[0].astype(np.int64) + start


def sieve_range(
    lo: int,
    hi: int,
    *,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> PrimeTable:
    """All primes in [lo, hi], ascending.

    Segments are sieved independently against the base primes up to
    sqrt(hi) and concatenated in segment order, so the output does not
    depend on segment_size or worker count.
    """
    if lo > hi:
        raise InvalidRangeError(f"lo={lo} > hi={hi}")
    if lo < 2:
        raise InvalidRangeError(f"lo={lo} < 2")
    if hi > SIEVE_CEILING:
        raise RangeTooLargeError(f"hi={hi} above ceiling 2^40")
    base = _base_sieve(math.isqrt(hi) + 1)
    starts = list(range(lo, hi + 1, segment_size))
    jobs = [(s, min(s + segment_size - 1, hi)) for s in starts]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda se: _sieve_segment(*se, base), jobs))
    else:
        chunks = [_sieve_segment(s, e, base) for s, e in jobs]
    primes = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return PrimeTable(lo, hi, primes)


def primes_upto(x: int, **kw) -> PrimeTable:
    return sieve_range(2, x, **kw)


def is_prime(n: int) -> bool:
    """Trial division; intended for spot checks, not bulk work."""
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def count_by_class(x: int, q: int, *, table: PrimeTable | None = None) -> dict[int, int]:
    """pi(x; q, a) for every residue a coprime to q."""
    if q < 1:
        raise InvalidRangeError(f"q={q} < 1")
    if x < 2:
        raise InvalidRangeError(f"x={x} < 2")
    primes = _primes_for(x, table)
    counts = np.bincount(primes % q, minlength=q)
    return {a: int(counts[a]) for a in range(q) if math.gcd(a, q) == 1}


def mertens_sum(x: int, *, table: PrimeTable | None = None, threads: int = 1) -> float:
    """Sum of 1/p over primes p <= x."""
    if x < 2:
        raise InvalidRangeError(f"x={x} < 2")
    primes = _primes_for(x, table)
    return fixed_sum(1.0 / primes.astype(np.float64), threads=threads)


def mangoldt(n: int) -> MangoldtValue:
    """log p when n is a power of the prime p, else 0."""
    if n < 1:
        raise InvalidRangeError(f"n={n} < 1")
    if n > 1:
        p = n
        for d in range(2, math.isqrt(n) + 1):
            if n % d == 0:
                p = d
                break
        m = n
        while m % p == 0:
            m //= p
        if m == 1:
            return MangoldtValue(n, math.log(p))
    return MangoldtValue(n, 0.0)


def _kth_root(x: int, k: int) -> int:
    """Floor of x^(1/k), exact."""
    r = int(round(x ** (1.0 / k)))
    while r > 0 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def chebyshev_psi(
    x: int,
    chi: RealCharacter | None = None,
    *,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> float:
    """Sum of chi(n) log p over prime powers n = p^k <= x.

    chi=None is the trivial character (all prime powers count).
    """
    if x < 1:
        raise InvalidRangeError(f"x={x} < 1")
    if x < 2:
        return 0.0
    primes = _primes_for(x, table)
    pieces = []
    k = 1
    while 2**k <= x:
        root = _kth_root(x, k)
        pk = primes[: int(np.searchsorted(primes, root, side="right"))]
        logs = np.log(pk.astype(np.float64))
        if chi is not None:
            logs = logs * (chi.on_array(pk).astype(np.float64) ** k)
        pieces.append(logs)
        k += 1
    return fixed_sum(np.concatenate(pieces), threads=threads)


def _primes_for(x: int, table: PrimeTable | None) -> np.ndarray:
    if table is None:
        table = sieve_range(2, int(x))
    elif table.hi < x or table.lo > 2:
        raise InvalidRangeError(
            f"prime table covers [{table.lo}, {table.hi}], need [2, {x}]"
        )
    return table.upto(x)


# ---------------------------------------------------------------------------
# On-disk prime cache: magic "PRMT", u32 version, lo/hi as u64 LE, then
# LEB128 deltas (first prime relative to lo, then gaps).
# ---------------------------------------------------------------------------


def write_prime_cache(path: str, table: PrimeTable) -> None:
    header = _PRIME_CACHE_MAGIC + struct.pack(
        "<IQQ", _PRIME_CACHE_VERSION, table.lo, table.hi
    )
    primes = table.primes
    if len(primes):
        deltas = np.empty(len(primes), dtype=np.int64)
        deltas[0] = primes[0] - table.lo
        np.subtract(primes[1:], primes[:-1], out=deltas[1:])
        payload = encode_varints(deltas.tolist())
    else:
        payload = b""
    atomic_write_bytes(path, header + payload)


def read_prime_cache(path: str) -> PrimeTable:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 24 or blob[:4] != _PRIME_CACHE_MAGIC:
        raise CacheCorruptError(f"{path}: bad magic")
    version, lo, hi = struct.unpack("<IQQ", blob[4:24])
    if version != _PRIME_CACHE_VERSION:
        raise CacheCorruptError(f"{path}: unsupported version {version}")
    deltas = decode_varints(blob[24:])
    primes = np.cumsum(np.asarray([lo] + deltas, dtype=np.int64))[1:]
    if len(primes) and (primes[-1] > hi or primes[0] < lo):
        raise CacheCorruptError(f"{path}: primes outside declared range")
    return PrimeTable(lo, hi, primes)
