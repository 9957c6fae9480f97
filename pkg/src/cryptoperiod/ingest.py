"""Load exchange data onto regular UTC grids, and simulate periodic test data."""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from .timegrid import MINUTE, SECOND, GridSpec, calendar_fields

__all__ = [
    "IngestError",
    "DataError",
    "MinuteGrid",
    "BlockRecord",
    "SyntheticSpec",
    "load_ohlcv_csv",
    "load_blocks_csv",
    "blocks_to_minute_grid",
    "simulate_periodic_grid",
    "normalize_factors",
    "load_synthetic_spec",
    "synthetic_spec_from_mapping",
    "save_ohlcv_csv",
    "dump_synthetic_spec",
    "DEFAULT_COLUMNS",
]

DEFAULT_COLUMNS = {
    "timestamp": "timestamp",
    "open": "open",
    "high": "high",
    "low": "low",
    "close": "close",
    "volume": "volume",
}

# Monday 2020-10-05 00:00 UTC
DEFAULT_SIM_START = 1_601_856_000


class IngestError(ValueError):
    """Input file could not be turned into a grid."""


class DataError(IngestError):
    """Input parsed but violates a data precondition (e.g. non-positive price)."""


@dataclass(frozen=True)
class MinuteGrid:
    """Log prices and volumes on a regular UTC grid.

    ``observed`` is False for slots that were forward-filled; those slots carry
    the previous log price and zero volume. Despite the name the grid may be
    at one-second resolution (``spec.resolution == SECOND``).
    """

    spec: GridSpec
    log_price: np.ndarray
    volume: np.ndarray
    observed: np.ndarray
    name: str = ""

    def __post_init__(self):
        n = self.spec.length
        if not (len(self.log_price) == len(self.volume) == len(self.observed) == n):
            raise ValueError("grid vectors must all have length spec.length")
        for arr in (self.log_price, self.volume, self.observed):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.spec.length

    @property
    def timestamps(self) -> np.ndarray:
        return self.spec.timestamps()

    def slice_time(self, start: Optional[int] = None, end: Optional[int] = None) -> "MinuteGrid":
        """Sub-grid covering the half-open epoch-second span ``[start, end)``."""
        res = self.spec.resolution
        lo = 0 if start is None else max(0, -(-(start - self.spec.start) // res))
        hi = self.spec.length if end is None else min(self.spec.length, -(-(end - self.spec.start) // res))
        if hi <= lo:
            raise IngestError("requested span does not overlap the grid")
        spec = GridSpec(self.spec.start + lo * res, res, hi - lo)
        return MinuteGrid(
            spec,
            self.log_price[lo:hi].copy(),
            self.volume[lo:hi].copy(),
            self.observed[lo:hi].copy(),
            self.name,
        )

    def with_volume(self, volume: np.ndarray) -> "MinuteGrid":
        return MinuteGrid(self.spec, self.log_price.copy(), np.asarray(volume, float).copy(), self.observed.copy(), self.name)


def _regularize(
    times: np.ndarray, log_price: np.ndarray, volume: np.ndarray, resolution: int, name: str
) -> MinuteGrid:
    """Place time-sorted unique observations on a gap-free grid."""
    start = int(times[0])
    length = int((times[-1] - start) // resolution) + 1
    idx = ((times - start) // resolution).astype(np.int64)
    lp = np.full(length, np.nan)
    vol = np.zeros(length)
    observed = np.zeros(length, dtype=bool)
    lp[idx] = log_price
    vol[idx] = volume
    observed[idx] = True
    # forward fill: index of the latest observed slot at or before each slot
    last = np.maximum.accumulate(np.where(observed, np.arange(length), 0))
    lp = lp[last]
    return MinuteGrid(GridSpec(start, resolution, length), lp, vol, observed, name)


def _parse_timestamps(col: pd.Series) -> tuple[np.ndarray, np.ndarray]:
    """Epoch seconds and a per-row "bad" mask."""
    if pd.api.types.is_integer_dtype(col):
        ms = col.to_numpy(dtype=np.int64)
        return ms // 1000, (ms % 1000) != 0
    numeric = pd.to_numeric(col, errors="coerce")
    if numeric.notna().all() and (numeric == np.floor(numeric)).all():
        ms = numeric.to_numpy(dtype=np.int64)
        return ms // 1000, (ms % 1000) != 0
    parsed = pd.to_datetime(col.astype(str), utc=True, errors="coerce", format="ISO8601")
    bad = parsed.isna().to_numpy()
    secs = np.zeros(len(col), dtype=np.int64)
    ok = ~bad
    epoch = pd.Timestamp(0, tz="UTC")
    secs[ok] = ((parsed[ok] - epoch) // pd.Timedelta(seconds=1)).to_numpy(np.int64)
    return secs, bad


def load_ohlcv_csv(
    path: str | Path,
    column_map: Optional[Mapping[str, str]] = None,
    resolution: int = MINUTE,
    name: Optional[str] = None,
) -> MinuteGrid:
    """Read an OHLCV bar file onto a regular grid.

    Parameters
    ----------
    path : path-like
        CSV with a header row. Timestamps are ISO-8601 (UTC) strings or
        integer epoch milliseconds; extra columns are ignored.
    column_map : mapping, optional
        Overrides of :data:`DEFAULT_COLUMNS`, e.g. ``{"close": "Close"}``.
    resolution : int
        ``MINUTE`` for one-minute bars, ``SECOND`` for one-second bars.

    Returns
    -------
    MinuteGrid
        One slot per bar interval between the first and last row. Duplicate
        timestamps keep the last row; missing bars are forward-filled.
    """
    path = Path(path)
    cols = dict(DEFAULT_COLUMNS)
    cols.update(column_map or {})
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise IngestError(f"{path}: file is empty") from None
    if frame.empty:
        raise IngestError(f"{path}: no data rows")
    for key in ("timestamp", "close", "volume"):
        if cols[key] not in frame.columns:
            raise IngestError(f"{path}: missing column {cols[key]!r}")

    secs, bad_ts = _parse_timestamps(frame[cols["timestamp"]])
    close = pd.to_numeric(frame[cols["close"]], errors="coerce").to_numpy(float)
    volume = pd.to_numeric(frame[cols["volume"]], errors="coerce").to_numpy(float)
    bad = bad_ts | ~np.isfinite(close) | ~np.isfinite(volume)
    if bad.any():
        line = int(np.flatnonzero(bad)[0]) + 2  # header is line 1
        raise IngestError(f"{path}: line {line}: unparseable row")
    misaligned = secs % resolution != 0
    if misaligned.any():
        line = int(np.flatnonzero(misaligned)[0]) + 2
        raise DataError(f"{path}: line {line}: timestamp not on a {resolution}s boundary")
    if (close <= 0).any():
        line = int(np.flatnonzero(close <= 0)[0]) + 2
        raise DataError(f"{path}: line {line}: non-positive close price")
    if (volume < 0).any():
        line = int(np.flatnonzero(volume < 0)[0]) + 2
        raise DataError(f"{path}: line {line}: negative volume")

    table = pd.DataFrame({"t": secs, "close": close, "volume": volume})
    table = table.drop_duplicates("t", keep="last").sort_values("t", kind="stable")
    return _regularize(
        table["t"].to_numpy(),
        np.log(table["close"].to_numpy()),
        table["volume"].to_numpy(),
        resolution,
        name if name is not None else path.stem,
    )


@dataclass(frozen=True)
class BlockRecord:
    """End-of-block pool reserves; ``timestamp`` in epoch seconds."""

    block_number: int
    timestamp: int
    reserve0: float
    reserve1: float
    volume_quote: Optional[float] = None


def save_ohlcv_csv(grid: MinuteGrid, path: str | Path) -> None:
    """Write a grid as OHLCV bars with integer epoch-millisecond timestamps.

    Each bar opens at the previous close, so ``high`` and ``low`` are the
    larger and smaller of the two.
    """
    close = np.exp(grid.log_price)
    open_ = np.concatenate([close[:1], close[:-1]])
    frame = pd.DataFrame(
        {
            "timestamp": grid.timestamps * 1000,
            "open": open_,
            "high": np.maximum(open_, close),
            "low": np.minimum(open_, close),
            "close": close,
            "volume": grid.volume,
        }
    )
    frame.to_csv(path, index=False, float_format="%.17g")


def load_blocks_csv(path: str | Path) -> list[BlockRecord]:
    """Read a block file; integer timestamps are epoch seconds (chain time)."""
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise IngestError(f"{path}: file is empty") from None
    if frame.empty:
        raise IngestError(f"{path}: no data rows")
    raw = pd.to_numeric(frame["timestamp"], errors="coerce")
    if raw.notna().all():
        secs = raw.to_numpy(np.int64)
    else:
        secs, bad = _parse_timestamps(frame["timestamp"].astype(str))
        if bad.any():
            raise IngestError(f"{path}: line {int(np.flatnonzero(bad)[0]) + 2}: unparseable row")
    numeric = {}
    for key in ("block_number", "reserve0", "reserve1"):
        numeric[key] = pd.to_numeric(frame[key], errors="coerce").to_numpy(float)
        if not np.isfinite(numeric[key]).all():
            line = int(np.flatnonzero(~np.isfinite(numeric[key]))[0]) + 2
            raise IngestError(f"{path}: line {line}: unparseable {key}")
    volume = None
    if "volume_quote" in frame.columns:
        volume = pd.to_numeric(frame["volume_quote"], errors="coerce").fillna(0.0).to_numpy(float)
    return [
        BlockRecord(
            int(numeric["block_number"][i]),
            int(secs[i]),
            float(numeric["reserve0"][i]),
            float(numeric["reserve1"][i]),
            None if volume is None else float(volume[i]),
        )
        for i in range(len(frame))
    ]


def blocks_to_minute_grid(
    records: Sequence[BlockRecord],
    quote_is_token0: bool = True,
    resolution: int = MINUTE,
    name: str = "",
) -> MinuteGrid:
    """Minute prices from end-of-block reserve ratios.

    Each minute takes the price ``reserve_quote / reserve_base`` of the last
    block stamped inside it, so intra-block fees and slippage never enter the
    price. Minutes without a block are forward-filled.
    """
    if not records:
        raise IngestError("no block records")
    numbers = np.array([r.block_number for r in records])
    if np.any(np.diff(numbers) <= 0):
        raise DataError("block numbers must be strictly increasing")
    r0 = np.array([r.reserve0 for r in records], float)
    r1 = np.array([r.reserve1 for r in records], float)
    if (r0 <= 0).any() or (r1 <= 0).any() or not (np.isfinite(r0).all() and np.isfinite(r1).all()):
        raise DataError("block reserves must be strictly positive")
    price = r0 / r1 if quote_is_token0 else r1 / r0
    vol = np.array([r.volume_quote or 0.0 for r in records], float)
    slot_time = np.array([r.timestamp for r in records], np.int64) // resolution * resolution

    table = pd.DataFrame({"t": slot_time, "lp": np.log(price), "v": vol})
    grouped = table.groupby("t", sort=True)
    last = grouped["lp"].last()
    total = grouped["v"].sum()
    return _regularize(last.index.to_numpy(), last.to_numpy(), total.to_numpy(), resolution, name)


def normalize_factors(factors: Sequence[float]) -> np.ndarray:
    """Rescale positive factors to geometric mean one."""
    f = np.asarray(factors, float)
    if (f <= 0).any():
        raise ValueError("factors must be strictly positive")
    return f / np.exp(np.mean(np.log(f)))


def _ones(n):
    return field(default_factory=lambda: np.ones(n))


@dataclass
class SyntheticSpec:
    """Parameters of a periodic random-walk grid.

    The return in slot (w, d, h, m) is Gaussian with standard deviation
    ``base_vol * day_factors[d-1] * hour_factors[h] * minute_factors[m]``
    (times ``second_factors[s]`` on one-second grids, where ``m = s // 60``).
    Volume is Gamma distributed with shape ``volume_shape`` and mean
    ``base_volume`` times the volume factors. Every factor vector must have
    geometric mean one.
    """

    length_weeks: int = 4
    base_vol: float = 1e-3
    day_factors: np.ndarray = _ones(7)
    hour_factors: np.ndarray = _ones(24)
    minute_factors: np.ndarray = _ones(60)
    second_factors: np.ndarray = _ones(3600)
    volume_day_factors: np.ndarray = _ones(7)
    volume_hour_factors: np.ndarray = _ones(24)
    volume_minute_factors: np.ndarray = _ones(60)
    volume_second_factors: np.ndarray = _ones(3600)
    base_volume: float = 1.0
    volume_shape: float = 2.0
    resolution: int = MINUTE
    start: int = DEFAULT_SIM_START
    start_price: float = 10_000.0
    seed: int = 0

    _LENGTHS = {
        "day_factors": 7,
        "hour_factors": 24,
        "minute_factors": 60,
        "second_factors": 3600,
        "volume_day_factors": 7,
        "volume_hour_factors": 24,
        "volume_minute_factors": 60,
        "volume_second_factors": 3600,
    }

    def validate(self) -> None:
        if self.length_weeks < 1:
            raise ValueError("length_weeks must be >= 1")
        if not self.base_vol > 0 or not self.base_volume > 0 or not self.volume_shape > 0:
            raise ValueError("base_vol, base_volume and volume_shape must be positive")
        if self.resolution not in (MINUTE, SECOND):
            raise ValueError("resolution must be 60 or 1")
        for key, n in self._LENGTHS.items():
            f = np.asarray(getattr(self, key), float)
            if f.shape != (n,):
                raise ValueError(f"{key} must have {n} entries")
            if (f <= 0).any() or not np.isfinite(f).all():
                raise ValueError(f"{key} must be strictly positive")
            if abs(np.mean(np.log(f))) > 1e-9:
                raise ValueError(f"{key} must have geometric mean 1")


def simulate_periodic_grid(spec: SyntheticSpec) -> MinuteGrid:
    """Random-walk log prices with multiplicative calendar volatility factors."""
    spec.validate()
    res = spec.resolution
    n = spec.length_weeks * 7 * 86_400 // res
    grid_spec = GridSpec(spec.start, res, n)
    cal = calendar_fields(grid_spec)
    d, h, m, s = cal["day"] - 1, cal["hour"], cal["minute"], cal["minute"] * 60 + cal["second"]

    def profile(day, hour, minute, second):
        out = np.asarray(day, float)[d] * np.asarray(hour, float)[h] * np.asarray(minute, float)[m]
        if res == SECOND:
            out = out * np.asarray(second, float)[s]
        return out

    sd = spec.base_vol * profile(spec.day_factors, spec.hour_factors, spec.minute_factors, spec.second_factors)
    vmean = spec.base_volume * profile(
        spec.volume_day_factors,
        spec.volume_hour_factors,
        spec.volume_minute_factors,
        spec.volume_second_factors,
    )
    rng = np.random.default_rng(spec.seed)
    returns = rng.standard_normal(n) * sd
    returns[0] = 0.0
    log_price = np.log(spec.start_price) + np.cumsum(returns)
    volume = rng.gamma(spec.volume_shape, 1.0 / spec.volume_shape, n) * vmean
    return MinuteGrid(grid_spec, log_price, volume, np.ones(n, dtype=bool), name="synthetic")


_SCALAR_KEYS = {
    "length_weeks": int,
    "base_vol": float,
    "base_volume": float,
    "volume_shape": float,
    "resolution": int,
    "start": int,
    "start_price": float,
    "seed": int,
}


def synthetic_spec_from_mapping(values: Mapping[str, str], source: str = "config") -> SyntheticSpec:
    """Build a :class:`SyntheticSpec` from string values keyed by field name.

    Factor vectors that are not already at geometric mean one (to 1e-9) are
    rescaled with :func:`normalize_factors`, so hand-written shapes such as
    ``1.1, 1.1, 1.1, 1.1, 1.15, 0.75, 0.8`` are accepted.
    """
    kwargs = {}
    for key, value in values.items():
        if key in _SCALAR_KEYS:
            kwargs[key] = _SCALAR_KEYS[key](value)
        elif key in SyntheticSpec._LENGTHS:
            f = np.array([float(v) for v in value.replace("\n", ",").split(",") if v.strip()])
            if (f > 0).all() and np.isfinite(f).all() and abs(np.mean(np.log(f))) > 1e-9:
                f = normalize_factors(f)
            kwargs[key] = f
        else:
            raise IngestError(f"{source}: unknown key {key!r}")
    spec = SyntheticSpec(**kwargs)
    spec.validate()
    return spec


def load_synthetic_spec(path: str | Path) -> SyntheticSpec:
    """Read a flat ``key = value`` file; vector keys take comma-separated decimals.

    Keys are the :class:`SyntheticSpec` field names. Omitted vectors default
    to all ones. Lines starting with ``#`` are comments.
    """
    parser = configparser.ConfigParser()
    parser.optionxform = str
    parser.read_string("[synthetic]\n" + Path(path).read_text())
    return synthetic_spec_from_mapping(dict(parser["synthetic"]), str(path))


def dump_synthetic_spec(spec: SyntheticSpec, path: str | Path) -> None:
    lines = []
    for f in fields(spec):
        value = getattr(spec, f.name)
        if f.name in SyntheticSpec._LENGTHS:
            value = ",".join(repr(float(v)) for v in np.asarray(value))
        lines.append(f"{f.name} = {value}")
    Path(path).write_text("\n".join(lines) + "\n")
