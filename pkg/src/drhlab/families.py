"""Uniform access to the two built-in unitary local-datum families.

A family hands out the trace of the k-th power of its local unitary
matrix, its local Euler factor, and the integer pole-order constant
delta.  Degree 1 wraps a real Dirichlet character; degree 2 wraps the
normalized tau eigenvalues, where the k-th power trace follows the
two-term recurrence t_0 = 2, t_1 = lambda(p), t_k = lambda(p) t_{k-1}
- t_{k-2}.  Ramified primes contribute trace 0 and local factor 1.
delta is declared data (+1 for the characters, -1 for the tau family),
not computed.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .characters import RealCharacter, nonprincipal_real_character
from .errors import ConfigError, SingularFactorError, TableTooSmallError
from .tau import TauTable, lambda_of


@dataclass(frozen=True)
class LocalFactor:
    p: int
    s: complex
    value: complex


@dataclass(frozen=True)
class UnitaryFamily:
    label: str
    degree: int
    delta: int
    ramified: frozenset[int]

    def trace_power(self, p: int, k: int) -> float:
        raise NotImplementedError

    def trace_power_array(self, primes: np.ndarray, k: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class CharacterFamily(UnitaryFamily):
    chi: RealCharacter = None  # type: ignore[assignment]

    def trace_power(self, p: int, k: int) -> float:
        if k < 1:
            raise ValueError("k >= 1 required")
        return float(self.chi(p) ** k)

    def trace_power_array(self, primes: np.ndarray, k: int) -> np.ndarray:
        vals = self.chi.on_array(primes).astype(np.float64)
        return vals**k if k % 2 else np.abs(vals)


@dataclass(frozen=True)
class DeltaFamily(UnitaryFamily):
    table: TauTable = None  # type: ignore[assignment]
    _lambda_cache: dict = field(default_factory=dict, compare=False)

    def lambda_at(self, p: int) -> float:
        if p > self.table.N:
            raise TableTooSmallError(f"prime {p} beyond tau table N={self.table.N}")
        return lambda_of(p, self.table)

    def lambda_array(self, primes: np.ndarray) -> np.ndarray:
        key = (len(primes), int(primes[0]), int(primes[-1])) if len(primes) else (0,)
        cached = self._lambda_cache.get(key)
        if cached is not None:
            return cached
        if len(primes) and int(primes[-1]) > self.table.N:
            raise TableTooSmallError(
                f"prime {int(primes[-1])} beyond tau table N={self.table.N}"
            )
        vals = self.table.values
        out = np.array(
            [vals[p] / (p**5 * np.sqrt(p)) for p in primes.tolist()], dtype=np.float64
        )
        self._lambda_cache[key] = out
        return out

    def trace_power(self, p: int, k: int) -> float:
        if k < 1:
            raise ValueError("k >= 1 required")
        lam = self.lambda_at(p)
        t_prev, t_cur = 2.0, lam
        for _ in range(k - 1):
            t_prev, t_cur = t_cur, lam * t_cur - t_prev
        return t_cur

    def trace_power_array(self, primes: np.ndarray, k: int) -> np.ndarray:
        lam = self.lambda_array(primes)
        t_prev = np.full_like(lam, 2.0)
        t_cur = lam.copy()
        for _ in range(k - 1):
            t_prev, t_cur = t_cur, lam * t_cur - t_prev
        return t_cur


def character_family(q: int, a: int = 1) -> CharacterFamily:
    """Degree-1 family for the nonprincipal real character mod q (q in {3, 4}).

    `a` indexes the character within the real group; only the nonprincipal
    one (a = 1) is supported.
    """
    if a != 1:
        raise ConfigError(f"unsupported character index {a}; only nonprincipal (1)")
    chi = nonprincipal_real_character(q)
    ramified = frozenset(p for p in range(2, q + 1) if q % p == 0 and _is_prime(p))
    return CharacterFamily(chi.label, 1, 1, ramified, chi)


def delta_family(table: TauTable) -> DeltaFamily:
    """Degree-2 family built on exact tau eigenvalues; delta = -1."""
    return DeltaFamily("delta", 2, -1, frozenset(), table)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def delta_of(family: UnitaryFamily) -> int:
    return family.delta


def local_factor(family: UnitaryFamily, p: int, s: complex) -> LocalFactor:
    """det(1 - M(p) p^{-s})^{-1}; ramified primes contribute factor 1."""
    s = complex(s)
    if s.real <= 0:
        raise ValueError(f"Re(s)={s.real} <= 0")
    if p in family.ramified:
        return LocalFactor(p, s, 1.0 + 0.0j)
    u = cmath.exp(-s * np.log(p))  # p^{-s}
    if family.degree == 1:
        det = 1.0 - family.trace_power(p, 1) * u
    else:
        det = 1.0 - family.trace_power(p, 1) * u + u * u
    if abs(det) < 1e-14:
        raise SingularFactorError(f"local determinant vanished at p={p}, s={s}")
    return LocalFactor(p, s, 1.0 / det)


def family_by_label(label: str, table: TauTable | None = None) -> UnitaryFamily:
    if label == "chi4":
        return character_family(4)
    if label == "chi3":
        return character_family(3)
    if label == "delta":
        if table is None:
            raise ConfigError("the delta family needs a tau table")
        return delta_family(table)
    raise ConfigError(f"unknown family label {label!r}; use chi4, chi3, or delta")
