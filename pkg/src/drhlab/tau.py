"""Exact Ramanujan tau values via the q-expansion of the discriminant form.

The cube of Euler's product is the sparse series
    sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2},
so the full 24th power is that series to the 8th power, reached with one
sparse squaring and two dense squarings.  Dense squarings run as number
theoretic transforms modulo several 31-bit primes (int64-safe in numpy)
and the exact signed coefficients come back through CRT.  The modulus
product exceeds twice the conservative coefficient bound 2*N^6 for every
supported N, so the table is exact and independent of the modulus set.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diskio import atomic_write_bytes
from .errors import (
    CacheCorruptError,
    CrtInconsistencyError,
    DeligneViolationError,
    InsufficientModuliError,
    TableTooSmallError,
    TauCeilingError,
    TransformLengthError,
)

TAU_EXACTNESS_CEILING = 4_000_000

# 31-bit primes p = c * 2^e + 1 with e >= 23, enough for transforms of
# length 2^23 (covers linear squarings up to the exactness ceiling).
DEFAULT_MODULI = (2013265921, 1811939329, 469762049, 754974721, 167772161)
# Appended in self-check mode as a pure verification modulus.
VERIFY_MODULUS = 998244353

_TAU_CACHE_MAGIC = b"TAUC"
_TAU_CACHE_VERSION = 1

_root_cache: dict[int, int] = {}
_bitrev_cache: dict[int, np.ndarray] = {}


def _primitive_root(p: int) -> int:
    if p in _root_cache:
        return _root_cache[p]
    n = p - 1
    factors = []
    m, d = n, 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, n // f, p) != 1 for f in factors):
            _root_cache[p] = g
            return g
    raise ValueError(f"no primitive root found for {p}")


def _bitrev_indices(n: int) -> np.ndarray:
    if n in _bitrev_cache:
        return _bitrev_cache[n]
    logn = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for i in range(logn):
        rev |= ((idx >> i) & 1) << (logn - 1 - i)
    _bitrev_cache[n] = rev
    return rev


def _twiddles(p: int, w0: int, half: int) -> np.ndarray:
    """Powers [1, w0, ..., w0^(half-1)] mod p, built by doubling."""
    w = np.ones(half, dtype=np.int64)
    if half > 1:
        w[1] = w0
    filled = min(2, half)
    while filled < half:
        step = pow(w0, filled, p)
        take = min(filled, half - filled)
        np.mod(w[:take] * step, p, out=w[filled : filled + take])
        filled += take
    return w


def _ntt(a: np.ndarray, p: int, invert: bool = False) -> np.ndarray:
    """Iterative radix-2 transform; len(a) must be a power of two."""
    n = len(a)
    root = _primitive_root(p)
    a = a[_bitrev_indices(n)]
    length = 2
    while length <= n:
        half = length >> 1
        w0 = pow(root, (p - 1) // length, p)
        if invert:
            w0 = pow(w0, p - 2, p)
        w = _twiddles(p, w0, half)
        b = a.reshape(-1, length)
        lo = b[:, :half]
        hi = b[:, half:]
        t = hi * w % p
        np.subtract(lo, t, out=hi)
        np.add(lo, t, out=lo)
        hi += p * (hi < 0)
        lo -= p * (lo >= p)
        length <<= 1
    if invert:
        a = a * pow(n, p - 2, p) % p
    return a


def _transform_capacity(p: int) -> int:
    """Largest power-of-two transform length the modulus supports."""
    e = 0
    m = p - 1
    while m % 2 == 0:
        m //= 2
        e += 1
    return 1 << e


def _padded_length(n: int, modulus: int) -> int:
    size = 1
    while size < n:
        size <<= 1
    if size > _transform_capacity(modulus):
        raise TransformLengthError(
            f"padded size {size} exceeds transform order of modulus {modulus}"
        )
    return size


def exact_convolve(a, b, modulus: int) -> np.ndarray:
    """Linear convolution of integer sequences, exact mod `modulus`."""
    a = np.mod(np.asarray(a, dtype=np.int64), modulus)
    b = np.mod(np.asarray(b, dtype=np.int64), modulus)
    if len(a) == 0 or len(b) == 0:
        return np.empty(0, dtype=np.int64)
    out_len = len(a) + len(b) - 1
    size = _padded_length(out_len, modulus)
    fa = np.zeros(size, dtype=np.int64)
    fb = np.zeros(size, dtype=np.int64)
    fa[: len(a)] = a
    fb[: len(b)] = b
    fa = _ntt(fa, modulus)
    fb = _ntt(fb, modulus)
    fa = fa * fb % modulus
    return _ntt(fa, modulus, invert=True)[:out_len]


def _square_mod(f: np.ndarray, modulus: int, out_len: int) -> np.ndarray:
    """First out_len coefficients of f*f mod modulus (one forward pass)."""
    size = _padded_length(2 * len(f) - 1, modulus)
    fa = np.zeros(size, dtype=np.int64)
    fa[: len(f)] = f
    fa = _ntt(fa, modulus)
    fa = fa * fa % modulus
    return _ntt(fa, modulus, invert=True)[:out_len]


def crt_reconstruct(
    residues: Sequence[int], moduli: Sequence[int], verify: int = 0
) -> int:
    """Signed representative in (-P/2, P/2] from pairwise-coprime residues.

    The trailing `verify` moduli do not enter the reconstruction; the
    result must reproduce their residues or CrtInconsistencyError is
    raised.
    """
    if len(residues) != len(moduli):
        raise ValueError("residues and moduli differ in length")
    if verify >= len(moduli):
        raise ValueError("at least one reconstruction modulus required")
    use = len(moduli) - verify
    prod = 1
    for m in moduli[:use]:
        prod *= m
    x = 0
    for r, m in zip(residues[:use], moduli[:use]):
        mi = prod // m
        x = (x + (int(r) % m) * mi * pow(mi, -1, m)) % prod
    if x > prod // 2:
        x -= prod
    for r, m in zip(residues[use:], moduli[use:]):
        if x % m != int(r) % m:
            raise CrtInconsistencyError(
                f"verification modulus {m} disagrees: {x % m} != {int(r) % m}"
            )
    return x


def _eta_cubed_sparse(n_terms: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponents and coefficients of the cube series below q^n_terms."""
    kmax = (math.isqrt(8 * n_terms) + 3) // 2 + 1
    ks = np.arange(kmax, dtype=np.int64)
    tri = ks * (ks + 1) // 2
    keep = tri < n_terms
    ks, tri = ks[keep], tri[keep]
    coef = (2 * ks + 1) * np.where(ks % 2 == 0, 1, -1)
    return tri, coef


def _sparse_square(n_terms: int) -> np.ndarray:
    """Dense 6th-power coefficients from the sparse cube, exact int64."""
    tri, coef = _eta_cubed_sparse(n_terms)
    idx = (tri[:, None] + tri[None, :]).ravel()
    val = (coef[:, None] * coef[None, :]).ravel()
    keep = idx < n_terms
    out = np.zeros(n_terms, dtype=np.int64)
    np.add.at(out, idx[keep], val[keep])
    return out


def _residue_pipeline(f2: np.ndarray, modulus: int, n_terms: int) -> np.ndarray:
    a = np.mod(f2, modulus)
    f4 = _square_mod(a, modulus, n_terms)
    return _square_mod(f4, modulus, n_terms)


@dataclass(frozen=True)
class TauTable:
    """Exact signed tau(1..N); values[0] is unused padding."""

    N: int
    values: list  # python ints, length N + 1

    def tau(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise TableTooSmallError(f"n={n} outside [1, {self.N}]")
        return self.values[n]


@dataclass(frozen=True)
class SatakeAngle:
    p: int
    theta: float  # in [0, pi]


def build_tau_table(
    N: int,
    *,
    moduli: Sequence[int] = DEFAULT_MODULI,
    self_check: bool = False,
    threads: int = 1,
) -> TauTable:
    """Exact tau(1..N) by three successive squarings of the sparse cube.

    The result is independent of the modulus set and of the worker count;
    self_check repeats the pipeline under an extra modulus and verifies
    every reconstructed value against it.
    """
    if not 1 <= N <= TAU_EXACTNESS_CEILING:
        raise TauCeilingError(
            f"N={N} outside [1, {TAU_EXACTNESS_CEILING}] (127-bit exactness ceiling)"
        )
    moduli = tuple(moduli)
    prod = 1
    for m in moduli:
        prod *= m
    if prod <= 4 * N**6:
        raise InsufficientModuliError(
            f"modulus product {prod} below signed coefficient bound 4*N^6"
        )
    check_moduli = moduli + (VERIFY_MODULUS,) if self_check else moduli
    if self_check and VERIFY_MODULUS in moduli:
        raise ValueError("verification modulus already in the reconstruction set")

    f2 = _sparse_square(N)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            residues = list(
                pool.map(lambda m: _residue_pipeline(f2, m, N), check_moduli)
            )
    else:
        residues = [_residue_pipeline(f2, m, N) for m in check_moduli]
    verify_res = residues[len(moduli)].tolist() if self_check else None
    residues = residues[: len(moduli)]

    # Garner mixed-radix digits, vectorized in int64 (moduli are 31-bit).
    digits = [residues[0]]
    for j in range(1, len(moduli)):
        mj = moduli[j]
        acc = digits[0] % mj
        pref = moduli[0] % mj
        for i in range(1, j):
            acc = (acc + digits[i] % mj * pref) % mj
            pref = pref * moduli[i] % mj
        inv = pow(int(pref), mj - 2, mj)
        digits.append((residues[j] - acc) % mj * inv % mj)

    digit_lists = [d.tolist() for d in digits]
    half = prod // 2
    values = [0] * (N + 1)
    vm = VERIFY_MODULUS
    for i in range(N):
        x = digit_lists[-1][i]
        for j in range(len(moduli) - 2, -1, -1):
            x = x * moduli[j] + digit_lists[j][i]
        if x > half:
            x -= prod
        if verify_res is not None and x % vm != verify_res[i]:
            raise CrtInconsistencyError(
                f"tau({i + 1}): verification modulus {vm} disagrees"
            )
        values[i + 1] = x
    return TauTable(N, values)


def lambda_of(n: int, table: TauTable) -> float:
    """Normalized coefficient tau(n) * n^(-11/2)."""
    t = table.tau(n)  # raises TableTooSmallError out of range
    return t / (n**5 * math.sqrt(n))


def theta_of(p: int, table: TauTable) -> SatakeAngle:
    """Angle in [0, pi] with tau(p) = 2 p^(11/2) cos(theta)."""
    c = lambda_of(p, table) / 2.0
    if abs(c) > 1.0 + 1e-12:
        raise DeligneViolationError(f"|lambda({p})/2| = {abs(c)} > 1 beyond slack")
    c = min(1.0, max(-1.0, c))
    return SatakeAngle(p, math.acos(c))


@dataclass(frozen=True)
class TauCheckReport:
    deligne_ok: bool
    multiplicativity_ok: bool
    recursion_ok: bool
    primes_checked: int
    composites_checked: int


def verify_table(table: TauTable, *, primes: np.ndarray | None = None) -> TauCheckReport:
    """Exact-integer validation of the whole table.

    Deligne at every prime (tau(p)^2 < 4 p^11); the defining Hecke
    identities at every composite index, driven by a smallest-prime-factor
    sieve, which pins multiplicativity over all coprime splittings by
    induction.
    """
    N = table.N
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            spf[p * p :: p][spf[p * p :: p] == 0] = p
    tau = table.values
    deligne_ok = True
    mult_ok = True
    rec_ok = True
    n_primes = 0
    n_comp = 0
    for n in range(2, N + 1):
        p = int(spf[n])
        if p == 0:
            n_primes += 1
            if tau[n] * tau[n] >= 4 * n**11:
                deligne_ok = False
            continue
        n_comp += 1
        pe, m = p, n // p
        while m % p == 0:
            pe *= p
            m //= p
        if m > 1:
            if tau[n] != tau[pe] * tau[m]:
                mult_ok = False
        else:
            # n = p^e with e >= 2: tau(p^e) = tau(p) tau(p^{e-1}) - p^11 tau(p^{e-2})
            prev = n // p
            if tau[n] != tau[p] * tau[prev] - p**11 * tau[prev // p]:
                rec_ok = False
    return TauCheckReport(deligne_ok, mult_ok, rec_ok, n_primes, n_comp)


# ---------------------------------------------------------------------------
# On-disk tau cache: magic "TAUC", u32 version, N as u64 LE, tau(1..N) each
# as 16-byte little-endian two's complement, then a u64 checksum equal to
# the sum of all preceding 8-byte words mod 2^64.
# ---------------------------------------------------------------------------


def _cache_checksum(data: bytes) -> int:
    words = np.frombuffer(data, dtype="<u8")
    return int(np.sum(words, dtype=np.uint64))


def write_tau_cache(path: str, table: TauTable) -> int:
    """Write the cache atomically; returns the checksum."""
    header = _TAU_CACHE_MAGIC + struct.pack("<IQ", _TAU_CACHE_VERSION, table.N)
    payload = b"".join(
        v.to_bytes(16, "little", signed=True) for v in table.values[1:]
    )
    checksum = _cache_checksum(header + payload)
    atomic_write_bytes(path, header + payload + struct.pack("<Q", checksum))
    return checksum


def read_tau_cache(path: str) -> tuple[TauTable, int]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 24 or blob[:4] != _TAU_CACHE_MAGIC:
        raise CacheCorruptError(f"{path}: bad magic")
    version, N = struct.unpack("<IQ", blob[4:16])
    if version != _TAU_CACHE_VERSION:
        raise CacheCorruptError(f"{path}: unsupported version {version}")
    expected = 16 + 16 * N + 8
    if len(blob) != expected:
        raise CacheCorruptError(f"{path}: size {len(blob)} != {expected}")
    (stored,) = struct.unpack("<Q", blob[-8:])
    if _cache_checksum(blob[:-8]) != stored:
        raise CacheCorruptError(f"{path}: checksum mismatch")
    body = blob[16:-8]
    values = [0] * (N + 1)
    for i in range(N):
        values[i + 1] = int.from_bytes(body[16 * i : 16 * i + 16], "little", signed=True)
    return TauTable(int(N), values), stored
