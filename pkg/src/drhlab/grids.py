"""Geometric evaluation grids; every asymptotic here lives on log log x."""

from __future__ import annotations

import numpy as np

from .errors import GridError

DEFAULT_FACTOR = 10.0**0.25


def geometric_grid(start: float, factor: float = DEFAULT_FACTOR, count: int | None = None,
                   stop: float | None = None) -> np.ndarray:
    """start, start*factor, ... for `count` points or up to `stop` inclusive."""
    if factor <= 1.0:
        raise GridError(f"grid factor {factor} must exceed 1")
    if (count is None) == (stop is None):
        raise GridError("give exactly one of count or stop")
    if count is None:
        if stop < start:
            raise GridError(f"grid stop {stop} below start {start}")
        count = int(np.floor(np.log(stop / start) / np.log(factor) + 1e-9)) + 1
    if count < 1:
        raise GridError("grid needs at least one point")
    return start * factor ** np.arange(count, dtype=np.float64)
