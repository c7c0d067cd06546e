"""Deterministic floating-point reductions.

Every scalar sum in the package goes through fixed-size blocks, each summed
exactly with math.fsum, followed by a fixed-shape pairwise merge tree.  The
tree shape depends only on the number of blocks, never on how many workers
produced the partials, so results are bit-identical across thread counts
and across sieve segmentations.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

BLOCK = 1 << 16


def block_partials(values: np.ndarray, threads: int = 1) -> list[float]:
    """Exact per-block sums of a 1-D float array, in fixed block order."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    starts = range(0, len(arr), BLOCK)
    if threads > 1 and len(arr) > BLOCK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda i: math.fsum(arr[i : i + BLOCK]), starts))
    return [math.fsum(arr[i : i + BLOCK]) for i in starts]


def pairwise_merge(partials: Sequence[float]) -> float:
    """Reduce partials through a fixed-shape binary tree."""
    work = list(partials)
    if not work:
        return 0.0
    while len(work) > 1:
        merged = [work[i] + work[i + 1] for i in range(0, len(work) - 1, 2)]
        if len(work) % 2:
            merged.append(work[-1])
        work = merged
    return work[0]


def fixed_sum(values: np.ndarray, threads: int = 1) -> float:
    """Deterministic compensated sum of a float array."""
    return pairwise_merge(block_partials(values, threads=threads))


def fixed_complex_sum(values: np.ndarray, threads: int = 1) -> complex:
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    return complex(
        fixed_sum(arr.real, threads=threads), fixed_sum(arr.imag, threads=threads)
    )


def checkpoint_sums(
    values: np.ndarray, counts: Sequence[int], threads: int = 1
) -> np.ndarray:
    """Prefix sums of values[:c] for each count c (ascending).

    A full block always contributes through the same subtree, so inserting
    extra checkpoints never changes the value reported at existing ones.
    """
    arr = np.ascontiguousarray(values, dtype=np.float64)
    partials = block_partials(arr, threads=threads)
    out = np.empty(len(counts), dtype=np.float64)
    for j, c in enumerate(counts):
        if not 0 <= c <= len(arr):
            raise ValueError(f"checkpoint count {c} outside [0, {len(arr)}]")
        nb = c // BLOCK
        out[j] = pairwise_merge(partials[:nb]) + math.fsum(arr[nb * BLOCK : c])
    return out
