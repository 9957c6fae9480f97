"""Relative activity profiles over calendar cycles.

Every profile compares a calendar unit (a day, hour, minute or second) with
the trailing window of ``S`` units that ends at it, ``S`` being the cycle
length (7, 24, 60 or 3600)::

    ratio_k = S * X_k / (X_k + X_{k-1} + ... + X_{k-S+1})

and averages the ratios of all units that fall in the same bin of the cycle.
A homogeneous series therefore gives exactly 1 in every bin. Confidence
bands come from the logit-transformed mean of the shares ``X_k / window``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.special import expit, logit
from scipy.stats import norm

from ._exact import block_sum, rolling_sum
from .ingest import MinuteGrid
from .measures import slot_returns
from .timegrid import CalendarCoord, SECOND

__all__ = [
    "PeriodicProfile",
    "ConditionalProfile",
    "RatioSample",
    "SCALES",
    "DegenerateBandError",
    "confidence_band",
    "relative_profile",
    "relative_day_profile",
    "relative_hour_profile",
    "relative_minute_profile",
    "relative_second_profile",
    "relative_illiquidity_hour",
    "hour_by_weekday",
    "minute_by_hour",
    "ratio_samples",
    "z_value",
]

# cycle length and unit width in seconds
SCALES = {
    "day": (7, 86_400),
    "hour": (24, 3_600),
    "minute": (60, 60),
    "second": (3_600, 1),
}
METRICS = ("volatility", "volume", "illiquidity")


class DegenerateBandError(ValueError):
    """Band undefined: fewer than two samples or a mean share of 0 or 1."""


@dataclass(frozen=True)
class RatioSample:
    value: float
    bin: int
    week_coord: CalendarCoord


@dataclass(frozen=True)
class PeriodicProfile:
    scale: str
    metric: str
    lam: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    n_obs: np.ndarray
    level: float = 0.95
    metadata: dict = field(default_factory=dict)

    @property
    def bins(self) -> np.ndarray:
        return np.arange(len(self.lam))

    def to_records(self) -> list[dict]:
        return [
            {
                "bin": int(b),
                "lambda": float(self.lam[b]),
                "ci_low": float(self.ci_low[b]),
                "ci_high": float(self.ci_high[b]),
                "n_obs": int(self.n_obs[b]),
            }
            for b in self.bins
        ]


@dataclass(frozen=True)
class ConditionalProfile:
    """Relative levels of an inner cycle conditional on an outer bin.

    ``outer`` is ``"weekday"`` (rows Monday..Sunday, 24 hour columns) or
    ``"hour"`` (24 rows, 60 minute columns).
    """

    outer: str
    matrix: np.ndarray
    n_obs: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_records(self) -> list[dict]:
        rows, cols = self.matrix.shape
        offset = 1 if self.outer == "weekday" else 0
        return [
            {"outer": i + offset, "inner": j, "value": float(self.matrix[i, j])}
            for i in range(rows)
            for j in range(cols)
        ]


def z_value(level: float) -> float:
    """Two-sided normal quantile; the conventional 1.96 at level 0.95."""
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    if level == 0.95:
        return 1.96
    return float(norm.ppf(0.5 + level / 2))


def _logit_band(theta, omega2, n, scale, z):
    """Vectorised logit/delta-method interval for mean shares ``theta``."""
    theta = np.asarray(theta, float)
    sigma = np.sqrt(omega2) / (np.sqrt(n) * theta * (1.0 - theta))
    center = logit(theta)
    return scale * expit(center - z * sigma), scale * expit(center + z * sigma)


def confidence_band(
    samples: Iterable[Union[float, RatioSample]], scale: int, level: float = 0.95
) -> tuple[float, float, float]:
    """Confidence interval for ``scale * E[Z]`` from shares ``Z`` in (0, 1).

    The mean share is mapped to log-odds, given a delta-method standard
    error, and the endpoints are mapped back with the logistic function.

    Returns
    -------
    (low, high, point)
        ``point`` is ``scale`` times the sample mean of the shares.
    """
    z = np.array([s.value if isinstance(s, RatioSample) else s for s in samples], float)
    n = len(z)
    if n < 2:
        raise DegenerateBandError("need at least two samples")
    if np.any((z < 0) | (z > 1)):
        raise ValueError("shares must lie in [0, 1]")
    theta = z.mean()
    if theta <= 0.0 or theta >= 1.0:
        raise DegenerateBandError("mean share is 0 or 1; log-odds undefined")
    omega2 = np.mean((z - theta) ** 2)
    low, high = _logit_band(theta, omega2, n, scale, z_value(level))
    return float(low), float(high), float(scale * theta)


def _unit_values(grid: MinuteGrid, metric: str, unit_seconds: int, exclude_filled: bool) -> np.ndarray:
    """Per-unit totals aligned so that index 0 is the week-1 origin.

    Units that are not fully covered by the grid are NaN.
    """
    spec = grid.spec
    if unit_seconds % spec.resolution:
        raise ValueError(f"a {unit_seconds}s unit needs a finer grid than {spec.resolution}s")
    per = unit_seconds // spec.resolution
    if metric == "volatility":
        v = np.abs(slot_returns(grid, exclude_filled))
    elif metric == "volume":
        v = np.asarray(grid.volume, float)
        if exclude_filled:
            v = np.where(grid.observed, v, np.nan)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    offset = spec.origin_offset
    total = -(-(offset + len(v)) // per) * per
    padded = np.full(total, np.nan)
    padded[offset : offset + len(v)] = v
    if per == 1:
        return padded
    return padded.reshape(-1, per).sum(axis=1)


def _illiquidity_units(grid: MinuteGrid, exclude_filled: bool) -> tuple[np.ndarray, int]:
    absret = _unit_values(grid, "volatility", 3_600, exclude_filled)
    vol = _unit_values(grid, "volume", 3_600, exclude_filled)
    zero = vol == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        illiq = np.where(zero, np.nan, absret / vol)
    return illiq, int(zero.sum())


def _profile_from_units(x, cycle, scale_name, metric, level, meta) -> PeriodicProfile:
    window = rolling_sum(x, cycle)
    finite = np.isfinite(window)
    dead = finite & (window == 0)
    ok = finite & ~dead
    idx = np.flatnonzero(ok)
    if len(idx) == 0:
        raise ValueError(f"no complete {cycle}-unit trailing window in the sample")
    ratio = cycle * x[idx] / window[idx]
    share = x[idx] / window[idx]
    bins = idx % cycle
    n = np.bincount(bins, minlength=cycle)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.bincount(bins, ratio, minlength=cycle) / n
        theta = np.bincount(bins, share, minlength=cycle) / n
        omega2 = np.bincount(bins, (share - theta[bins]) ** 2, minlength=cycle) / n
        low, high = _logit_band(theta, omega2, n, cycle, z_value(level))
    banded = (n >= 2) & (theta > 0) & (theta < 1)
    low = np.where(banded, np.minimum(low, lam), np.nan)
    high = np.where(banded, np.maximum(high, lam), np.nan)
    meta = dict(meta)
    meta.update(
        n_dead_windows=int(dead.sum()),
        n_unbanded_bins=int((~banded).sum()),
        band="logit delta-method",
    )
    return PeriodicProfile(scale_name, metric, lam, low, high, n, level, meta)


def relative_profile(
    grid: MinuteGrid,
    scale: str,
    metric: str = "volatility",
    level: float = 0.95,
    exclude_filled: bool = False,
) -> PeriodicProfile:
    """Relative profile of ``metric`` over the cycle named by ``scale``.

    Parameters
    ----------
    scale : {"day", "hour", "minute", "second"}
        Cycle: day of week, hour of day, minute of hour, second of hour.
    metric : {"volatility", "volume", "illiquidity"}
        Volatility uses absolute returns. Illiquidity is only defined at the
        hour scale: absolute returns over the hour divided by its volume.
    """
    if scale not in SCALES:
        raise ValueError(f"unknown scale {scale!r}")
    cycle, unit = SCALES[scale]
    meta = {"exclude_filled": exclude_filled}
    if metric == "illiquidity":
        if scale != "hour":
            raise ValueError("illiquidity is defined at the hour scale only")
        x, n_zero = _illiquidity_units(grid, exclude_filled)
        if not np.isfinite(x).any():
            raise ValueError("no complete hour with positive volume")
        meta["n_zero_volume_hours"] = n_zero
    else:
        x = _unit_values(grid, metric, unit, exclude_filled)
    return _profile_from_units(x, cycle, scale, metric, level, meta)


def relative_day_profile(grid, metric="volatility", level=0.95, exclude_filled=False):
    return relative_profile(grid, "day", metric, level, exclude_filled)


def relative_hour_profile(grid, metric="volatility", level=0.95, exclude_filled=False):
    return relative_profile(grid, "hour", metric, level, exclude_filled)


def relative_minute_profile(grid, metric="volatility", level=0.95, exclude_filled=False):
    return relative_profile(grid, "minute", metric, level, exclude_filled)


def relative_second_profile(grid, metric="volatility", level=0.95, exclude_filled=False):
    """Second-of-hour profile; needs a one-second grid.

    The 3600-second trailing window crosses hour boundaries freely.
    """
    if grid.spec.resolution != SECOND:
        raise ValueError("second-scale profiles need a one-second grid")
    return relative_profile(grid, "second", metric, level, exclude_filled)


def relative_illiquidity_hour(grid, level=0.95, exclude_filled=False):
    return relative_profile(grid, "hour", "illiquidity", level, exclude_filled)


def ratio_samples(grid: MinuteGrid, scale: str, bin: int, metric: str = "volatility") -> list[RatioSample]:
    """The shares ``X_k / window_k`` that enter one bin of a profile."""
    cycle, unit = SCALES[scale]
    if metric == "illiquidity":
        x, _ = _illiquidity_units(grid, False)
    else:
        x = _unit_values(grid, metric, unit, False)
    window = rolling_sum(x, cycle)
    idx = np.flatnonzero(np.isfinite(window) & (window > 0))
    idx = idx[idx % cycle == bin]
    return [
        RatioSample(float(x[k] / window[k]), bin, CalendarCoord.from_seconds(int(k) * unit))
        for k in idx
    ]


def _conditional(x, inner, outer_cycle, outer_name, meta) -> ConditionalProfile:
    usable = len(x) // inner * inner
    blocks = x[:usable].reshape(-1, inner)
    complete = ~np.isnan(blocks).any(axis=1)
    totals = np.full(len(blocks), np.nan)
    totals[complete] = block_sum(blocks[complete])
    ok = complete & (totals > 0)
    rows = np.flatnonzero(ok)
    shares = inner * blocks[rows] / totals[rows, None]
    outer = rows % outer_cycle
    counts = np.bincount(outer, minlength=outer_cycle)
    sums = np.zeros((outer_cycle, inner))
    np.add.at(sums, outer, shares)
    with np.errstate(divide="ignore", invalid="ignore"):
        matrix = sums / counts[:, None]
    meta = dict(meta)
    meta.update(n_incomplete=int((~complete).sum()), n_zero=int((complete & ~ok).sum()))
    return ConditionalProfile(outer_name, matrix, counts, meta)


def hour_by_weekday(grid: MinuteGrid, metric: str = "volatility") -> ConditionalProfile:
    """7 x 24 hour-of-day shares computed within each day, averaged by weekday."""
    x = _unit_values(grid, metric, 3_600, False)
    return _conditional(x, 24, 7, "weekday", {"metric": metric})


def minute_by_hour(grid: MinuteGrid, metric: str = "volatility") -> ConditionalProfile:
    """24 x 60 minute-of-hour shares computed within each hour, averaged by hour of day."""
    x = _unit_values(grid, metric, 60, False)
    return _conditional(x, 60, 24, "hour", {"metric": metric})
