"""Return series with their daily realized variance and correlation functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._exact import block_sum
from .ingest import MinuteGrid
from .timegrid import MINUTE, GridSpec

__all__ = [
    "ReturnSeries",
    "DailyRV",
    "CorrelationFunction",
    "slot_returns",
    "log_returns",
    "realized_variance",
    "annualized_vol",
    "cross_correlation",
    "correlation_matrix",
]

BAND_METHOD = "white-noise 1.96/sqrt(n)"


@dataclass(frozen=True)
class ReturnSeries:
    """Overlapping ``step``-slot log returns; ``values[i]`` ends at slot ``i + step``."""

    values: np.ndarray
    step: int
    spec: GridSpec
    excluded_filled: bool = False

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class DailyRV:
    day_index: np.ndarray  # datetime64[D]
    rv: np.ndarray
    n_returns: np.ndarray
    complete: np.ndarray


@dataclass(frozen=True)
class CorrelationFunction:
    lags: np.ndarray
    rho: np.ndarray
    band_halfwidth: np.ndarray
    n: np.ndarray
    metadata: dict = field(default_factory=dict)

    def significant(self) -> np.ndarray:
        """Lags whose estimate lies outside the band."""
        return self.lags[np.abs(self.rho) > self.band_halfwidth]


def slot_returns(grid: MinuteGrid, exclude_filled: bool = False) -> np.ndarray:
    """One-slot returns aligned to grid slots; slot 0 is NaN.

    With ``exclude_filled`` a return is NaN if either endpoint is a filled slot.
    """
    y = np.empty(len(grid))
    y[0] = np.nan
    y[1:] = np.diff(grid.log_price)
    if exclude_filled:
        obs = grid.observed
        y[1:][~(obs[1:] & obs[:-1])] = np.nan
    return y


def log_returns(grid: MinuteGrid, step_minutes: int = 1, exclude_filled: bool = False) -> ReturnSeries:
    """Returns over ``step_minutes`` slots, emitted at every slot ``>= step``."""
    step = int(step_minutes)
    if step < 1:
        raise ValueError("step must be >= 1")
    if step >= len(grid):
        raise ValueError(f"step {step} must be smaller than the grid length {len(grid)}")
    lp = grid.log_price
    values = lp[step:] - lp[:-step]
    if exclude_filled:
        obs = grid.observed
        values = values.copy()
        values[~(obs[step:] & obs[:-step])] = np.nan
    return ReturnSeries(values, step, grid.spec, exclude_filled)


def realized_variance(grid: MinuteGrid) -> DailyRV:
    """Daily sums of squared five-minute log returns (288 per complete UTC day).

    The price at minute ``i`` of day ``t`` is the close of the bar that ends
    there, so the day's first return starts from the previous day's last
    close. When the grid begins exactly at midnight that close is unknown and
    the first bar's close is used instead; such a day is not ``complete``.
    """
    if len(grid) == 0:
        raise ValueError("empty grid")
    spec = grid.spec
    if spec.resolution != MINUTE:
        raise ValueError("realized_variance needs a one-minute grid")
    day0 = spec.start - spec.start % 86_400
    offset = (spec.start - day0) // 60
    n_days = -(-(offset + len(grid)) // 1440)
    # boundary b sits at minute b after day0; it is the close of bar b-1
    price = np.full(n_days * 1440 + 1, np.nan)
    price[offset + 1 : offset + 1 + len(grid)] = grid.log_price
    substituted = offset == 0
    if substituted:
        price[0] = grid.log_price[0]
    five = price[::5]
    diff = (five[1:] - five[:-1]).reshape(n_days, 288)
    valid = ~np.isnan(diff)
    rv = block_sum(np.where(valid, diff * diff, 0.0))
    n_returns = valid.sum(axis=1)
    complete = n_returns == 288
    if substituted:
        complete[0] = False
    keep = n_returns > 0
    days = (np.datetime64(day0, "s").astype("datetime64[D]") + np.arange(n_days)).astype("datetime64[D]")
    return DailyRV(days[keep], rv[keep], n_returns[keep], complete[keep])


def annualized_vol(rv):
    """Annualised volatility in percent: ``sqrt(365 * rv) * 100``."""
    arr = np.asarray(rv, dtype=float)
    if np.any(arr < 0):
        raise ValueError("realized variance must be non-negative")
    out = np.sqrt(365.0 * arr) * 100.0
    return float(out) if out.ndim == 0 else out


def _pearson(x: np.ndarray, y: np.ndarray) -> tuple[float, int]:
    ok = ~(np.isnan(x) | np.isnan(y))
    x, y = x[ok], y[ok]
    n = len(x)
    if n < 3:
        raise ValueError("fewer than three overlapping observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx == 0 or syy == 0:
        raise ValueError("degenerate (zero-variance) series")
    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0)), n


def _check_aligned(a: ReturnSeries, b: ReturnSeries) -> None:
    if len(a) != len(b) or a.step != b.step or a.spec != b.spec:
        raise ValueError("return series are not aligned on the same grid")


def cross_correlation(
    a: ReturnSeries, b: ReturnSeries, max_lag: int, two_sided: bool = False
) -> CorrelationFunction:
    """Sample ``corr(a_i, b_{i+h})`` for ``h = 0..max_lag``.

    Positive values at ``h > 0`` mean ``a`` leads ``b``. ``two_sided`` adds
    negative lags. Bands are the white-noise ``1.96 / sqrt(n)`` half-widths,
    ``n`` being the number of overlapping pairs at each lag.
    """
    _check_aligned(a, b)
    n_total = len(a)
    if max_lag < 0 or max_lag >= n_total / 10:
        raise ValueError(f"max_lag must be in [0, {n_total / 10}) for series of length {n_total}")
    lags = np.arange(-max_lag if two_sided else 0, max_lag + 1)
    x, y = a.values, b.values
    rho = np.empty(len(lags))
    counts = np.empty(len(lags), dtype=np.int64)
    for i, h in enumerate(lags):
        if h >= 0:
            rho[i], counts[i] = _pearson(x[: n_total - h], y[h:])
        else:
            rho[i], counts[i] = _pearson(x[-h:], y[: n_total + h])
    meta = {"band": BAND_METHOD, "excluded_filled": a.excluded_filled or b.excluded_filled}
    return CorrelationFunction(lags, rho, 1.96 / np.sqrt(counts), counts, meta)


def correlation_matrix(series: Sequence[ReturnSeries]) -> np.ndarray:
    """Contemporaneous Pearson correlations of aligned return series."""
    if len(series) < 2:
        raise ValueError("need at least two series")
    k = len(series)
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            _check_aligned(series[i], series[j])
            out[i, j] = out[j, i] = _pearson(series[i].values, series[j].values)[0]
    return out
