"""Calendar indexing of UTC grids into (week, day, hour, minute, second) coordinates.

Weeks start on Monday 00:00 UTC. Week 1 is the week containing the first slot
of a grid, so a grid that starts mid-week has a partial first week.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

__all__ = [
    "CalendarCoord",
    "CalendarRangeError",
    "CalendarUnderflowError",
    "GridSpec",
    "MINUTE",
    "SECOND",
    "coord_of",
    "shift",
    "slot_of",
    "week_origin",
    "calendar_fields",
]

MINUTE = 60
SECOND = 1

SECONDS_PER_DAY = 86_400
SECONDS_PER_WEEK = 7 * SECONDS_PER_DAY
# 1970-01-05 00:00 UTC was a Monday.
_EPOCH_MONDAY = 4 * SECONDS_PER_DAY


class CalendarRangeError(ValueError):
    """A slot or coordinate lies outside its valid range."""


class CalendarUnderflowError(CalendarRangeError):
    """A shift moved a coordinate before week 1."""


@dataclass(frozen=True, order=True)
class CalendarCoord:
    """Canonical calendar coordinate; ``day`` 1 is Monday."""

    week: int
    day: int
    hour: int
    minute: int
    second: int = 0

    def __post_init__(self):
        if self.week < 1:
            raise CalendarRangeError(f"week must be >= 1, got {self.week}")
        if not 1 <= self.day <= 7:
            raise CalendarRangeError(f"day must be in 1..7, got {self.day}")
        if not 0 <= self.hour <= 23:
            raise CalendarRangeError(f"hour must be in 0..23, got {self.hour}")
        if not 0 <= self.minute <= 59:
            raise CalendarRangeError(f"minute must be in 0..59, got {self.minute}")
        if not 0 <= self.second <= 59:
            raise CalendarRangeError(f"second must be in 0..59, got {self.second}")

    def to_seconds(self) -> int:
        """Seconds elapsed since the start of week 1."""
        days = (self.week - 1) * 7 + (self.day - 1)
        return ((days * 24 + self.hour) * 60 + self.minute) * 60 + self.second

    @classmethod
    def from_seconds(cls, offset: int) -> "CalendarCoord":
        if offset < 0:
            raise CalendarUnderflowError(f"offset {offset}s precedes week 1")
        week, rem = divmod(int(offset), SECONDS_PER_WEEK)
        day, rem = divmod(rem, SECONDS_PER_DAY)
        hour, rem = divmod(rem, 3600)
        minute, second = divmod(rem, 60)
        return cls(week + 1, day + 1, hour, minute, second)


def week_origin(timestamp: int) -> int:
    """Epoch seconds of the Monday 00:00 UTC at or before ``timestamp``."""
    return timestamp - (timestamp - _EPOCH_MONDAY) % SECONDS_PER_WEEK


@dataclass(frozen=True)
class GridSpec:
    """A regular UTC grid.

    Parameters
    ----------
    start : int
        Epoch seconds (UTC) of slot 0; must be a multiple of ``resolution``.
    resolution : int
        Slot width in seconds, ``MINUTE`` (60) or ``SECOND`` (1).
    length : int
        Number of slots.
    """

    start: int
    resolution: int
    length: int

    def __post_init__(self):
        if self.resolution not in (MINUTE, SECOND):
            raise ValueError(f"resolution must be 60 or 1 seconds, got {self.resolution}")
        if self.start % self.resolution:
            raise ValueError("start is not aligned to the grid resolution")
        if self.length < 0:
            raise ValueError("length must be non-negative")

    @property
    def origin(self) -> int:
        """Epoch seconds at which week 1 begins."""
        return week_origin(self.start)

    @property
    def origin_offset(self) -> int:
        """Number of slots between the week-1 origin and slot 0."""
        return (self.start - self.origin) // self.resolution

    @property
    def end(self) -> int:
        """Epoch seconds one slot past the last slot."""
        return self.start + self.length * self.resolution

    @property
    def start_datetime(self) -> datetime:
        return datetime.fromtimestamp(self.start, tz=timezone.utc)

    def timestamps(self) -> np.ndarray:
        """Epoch seconds of every slot."""
        return self.start + self.resolution * np.arange(self.length, dtype=np.int64)


def coord_of(spec: GridSpec, slot: int) -> CalendarCoord:
    """Calendar coordinate of ``slot``."""
    if not 0 <= slot < spec.length:
        raise CalendarRangeError(f"slot {slot} outside 0..{spec.length - 1}")
    return CalendarCoord.from_seconds(spec.start + slot * spec.resolution - spec.origin)


def slot_of(spec: GridSpec, coord: CalendarCoord) -> int:
    """Inverse of :func:`coord_of`."""
    offset = spec.origin + coord.to_seconds() - spec.start
    slot, rem = divmod(offset, spec.resolution)
    if rem or not 0 <= slot < spec.length:
        raise CalendarRangeError(f"{coord} is not a slot of this grid")
    return slot


def shift(coord: CalendarCoord, delta_minutes: int = 0, delta_seconds: int = 0) -> CalendarCoord:
    """Move ``coord`` by a signed number of minutes (and seconds).

    Carries and borrows propagate through minute, hour, day and week, so one
    minute before ``(w, 1, 0, 0)`` is ``(w - 1, 7, 23, 59)``. Moving before the
    start of week 1 raises :class:`CalendarUnderflowError`.
    """
    return CalendarCoord.from_seconds(coord.to_seconds() + 60 * delta_minutes + delta_seconds)


def calendar_fields(spec: GridSpec) -> dict[str, np.ndarray]:
    """Vectorised ``coord_of`` over every slot of the grid."""
    offset = spec.timestamps() - spec.origin
    week, rem = np.divmod(offset, SECONDS_PER_WEEK)
    day, rem = np.divmod(rem, SECONDS_PER_DAY)
    hour, rem = np.divmod(rem, 3600)
    minute, second = np.divmod(rem, 60)
    return {
        "week": week + 1,
        "day": day + 1,
        "hour": hour,
        "minute": minute,
        "second": second,
    }
