"""Real Dirichlet characters of conductor 3 and 4.

Only the two nonprincipal real characters of smallest conductor are
supported; both are quadratic, so chi^2 is principal on units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class RealCharacter:
    modulus: int
    values: tuple[int, ...]  # indexed by n mod modulus
    label: str

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]

    def on_array(self, ns: np.ndarray) -> np.ndarray:
        table = np.asarray(self.values, dtype=np.int64)
        return table[np.asarray(ns) % self.modulus]


# chi4(n) = (-1)^((n-1)/2) on odd n; chi3 is the Legendre symbol mod 3.
CHI4 = RealCharacter(4, (0, 1, 0, -1), "chi4")
CHI3 = RealCharacter(3, (0, 1, -1), "chi3")

_BY_MODULUS = {3: CHI3, 4: CHI4}


def nonprincipal_real_character(q: int) -> RealCharacter:
    try:
        return _BY_MODULUS[q]
    except KeyError:
        raise ConfigError(f"unsupported modulus {q}; supported: 3, 4") from None
