"""Compensated summation for long mode-sum reductions."""

from __future__ import annotations

import math

import numpy as np

# Fixed block size keeps the rounding bound independent of the total term
# count: pairwise sums within each block, exactly rounded fsum across blocks.
_BLOCK = 4096


def compensated_sum(values: np.ndarray) -> float:
    """Sum a float64 array with rounding error that does not grow with length.

    The array is reduced blockwise (numpy pairwise summation), and the block
    sums are combined with math.fsum, which is exactly rounded regardless of
    ordering or magnitude spread.
    """
    arr = np.asarray(values, dtype=np.float64)
    n = arr.size
    if n == 0:
        return 0.0
    if n <= _BLOCK:
        return float(math.fsum(arr))
    full = n // _BLOCK
    head = arr[: full * _BLOCK].reshape(full, _BLOCK)
    parts = head.sum(axis=1).tolist()
    rest = arr[full * _BLOCK:]
    if rest.size:
        parts.append(rest.sum())
    return float(math.fsum(parts))


def compensated_dot(a: np.ndarray, b: np.ndarray) -> float:
    """Blockwise dot product with the same rounding contract as
    compensated_sum, without materializing the elementwise product."""
    n = a.size
    if n == 0:
        return 0.0
    if n <= _BLOCK:
        return float(math.fsum(a * b))
    full = n // _BLOCK
    ha = a[: full * _BLOCK].reshape(full, _BLOCK)
    hb = b[: full * _BLOCK].reshape(full, _BLOCK)
    parts = np.einsum("ij,ij->i", ha, hb).tolist()
    ra = a[full * _BLOCK:]
    if ra.size:
        parts.append(np.dot(ra, b[full * _BLOCK:]))
    return float(math.fsum(parts))
