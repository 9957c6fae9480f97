import numpy as np
import pytest
from hypothesis import given, strategies as st

from cryptoperiod.timegrid import (
    MINUTE,
    SECOND,
    CalendarCoord,
    CalendarRangeError,
    CalendarUnderflowError,
    GridSpec,
    calendar_fields,
    coord_of,
    shift,
    slot_of,
    week_origin,
)

MONDAY = 1601856000  # 2020-10-05


def test_week_origin_known_dates():
    assert week_origin(MONDAY) == MONDAY
    # Thursday 2020-10-01 12:34 belongs to the week of Monday 2020-09-28
    assert week_origin(1601555640) == 1601251200
    assert week_origin(345600) == 345600  # 1970-01-05 was a Monday


def test_coord_of_first_slot_mid_week():
    spec = GridSpec(1601510400, MINUTE, 100)  # Thursday 2020-10-01 00:00
    assert coord_of(spec, 0) == CalendarCoord(1, 4, 0, 0)
    assert coord_of(spec, 61) == CalendarCoord(1, 4, 1, 1)


def test_coord_validation():
    with pytest.raises(CalendarRangeError):
        CalendarCoord(0, 1, 0, 0)
    with pytest.raises(CalendarRangeError):
        CalendarCoord(1, 8, 0, 0)
    with pytest.raises(CalendarRangeError):
        CalendarCoord(1, 1, 24, 0)
    with pytest.raises(CalendarRangeError):
        coord_of(GridSpec(MONDAY, MINUTE, 5), 5)


def test_shift_borrows_across_week():
    assert shift(CalendarCoord(2, 1, 0, 0), delta_minutes=-1) == CalendarCoord(1, 7, 23, 59)
    assert shift(CalendarCoord(1, 7, 23, 59), delta_minutes=1) == CalendarCoord(2, 1, 0, 0)
    with pytest.raises(CalendarUnderflowError):
        shift(CalendarCoord(1, 1, 0, 0), delta_minutes=-1)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(MONDAY + 1, MINUTE, 3)
    with pytest.raises(ValueError):
        GridSpec(MONDAY, 5, 3)


def test_calendar_fields_matches_coord_of():
    spec = GridSpec(1601555640, MINUTE, 20_000)
    fields = calendar_fields(spec)
    for slot in (0, 1, 719, 5000, 19_999):
        c = coord_of(spec, slot)
        assert (fields["week"][slot], fields["day"][slot], fields["hour"][slot], fields["minute"][slot]) == (
            c.week, c.day, c.hour, c.minute,
        )


@given(
    start_min=st.integers(0, 60 * 24 * 7 * 3),
    length=st.integers(1, 50_000),
    frac=st.floats(0, 1, exclude_max=True),
    res=st.sampled_from([MINUTE, SECOND]),
)
def test_slot_coord_round_trip(start_min, length, frac, res):
    spec = GridSpec(MONDAY + 60 * start_min, res, length)
    slot = int(frac * length)
    assert slot_of(spec, coord_of(spec, slot)) == slot


@given(
    seconds=st.integers(0, 10**8),
    delta=st.integers(-10**6, 10**6),
)
def test_shift_is_additive(seconds, delta):
    c = CalendarCoord.from_seconds(seconds)
    target = seconds + 60 * delta
    if target < 0:
        with pytest.raises(CalendarUnderflowError):
            shift(c, delta_minutes=delta)
    else:
        out = shift(c, delta_minutes=delta)
        assert out.to_seconds() == target
        assert shift(out, delta_minutes=-delta) == c


def test_timestamps_spacing():
    spec = GridSpec(MONDAY, SECOND, 100)
    ts = spec.timestamps()
    np.testing.assert_array_equal(np.diff(ts), 1)
    assert spec.end == MONDAY + 100
