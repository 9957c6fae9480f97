"""Correctly rounded block and sliding-window sums.

The periodicity ratios are ``S * x_k / sum(window)``. When the window holds S
copies of the same value, an exactly rounded window sum equals ``fl(S * x)``
and the ratio is exactly one. Plain cumulative or pairwise sums do not
guarantee that, so the sums below carry a double-double accumulator.
"""
from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["rolling_sum", "block_sum"]


@njit(cache=True, inline="always")
def _dd_add(hi, lo, v):
    s = hi + v
    bb = s - hi
    err = (hi - (s - bb)) + (v - bb)
    err += lo
    out_hi = s + err
    out_lo = err - (out_hi - s)
    return out_hi, out_lo


@njit(cache=True)
def _rolling_sum(x, window):
    n = x.shape[0]
    out = np.full(n, np.nan)
    hi = 0.0
    lo = 0.0
    n_bad = 0
    for i in range(n):
        v = x[i]
        if np.isnan(v):
            n_bad += 1
        else:
            hi, lo = _dd_add(hi, lo, v)
        if i >= window:
            u = x[i - window]
            if np.isnan(u):
                n_bad -= 1
            else:
                hi, lo = _dd_add(hi, lo, -u)
        if i >= window - 1 and n_bad == 0:
            out[i] = hi
        if n_bad == window:
            # window holds nothing; drop accumulated rounding residue
            hi = 0.0
            lo = 0.0
    return out


@njit(cache=True)
def _block_sum(x):
    n, m = x.shape
    out = np.empty(n)
    for i in range(n):
        hi = 0.0
        lo = 0.0
        for j in range(m):
            hi, lo = _dd_add(hi, lo, x[i, j])
        out[i] = hi
    return out


def rolling_sum(x: np.ndarray, window: int) -> np.ndarray:
    """Trailing sums ``out[i] = sum(x[i-window+1 : i+1])``.

    Entries whose window is incomplete or touches a NaN are NaN.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    return _rolling_sum(np.ascontiguousarray(x, dtype=np.float64), int(window))


def block_sum(x: np.ndarray) -> np.ndarray:
    """Row sums of a 2-D array; NaN propagates."""
    return _block_sum(np.ascontiguousarray(x, dtype=np.float64))
