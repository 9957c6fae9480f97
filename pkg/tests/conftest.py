import numpy as np
import pytest

from cryptoperiod.ingest import MinuteGrid, SyntheticSpec, simulate_periodic_grid
from cryptoperiod.timegrid import MINUTE, SECOND, GridSpec

MONDAY = 1601856000  # 2020-10-05 00:00 UTC


def zigzag_grid(step_sizes, start=MONDAY, resolution=MINUTE, volume=None, base=9.0):
    """Grid whose slot returns alternate in sign with magnitudes ``step_sizes[k]``.

    Returns are exact in floating point only when every magnitude is the same
    value, which is what the homogeneity fixtures rely on.
    """
    steps = np.asarray(step_sizes, float)
    n = len(steps)
    signs = np.where(np.arange(n) % 2 == 1, 1.0, -1.0)
    lp = base + np.cumsum(signs * steps)
    vol = np.ones(n) if volume is None else np.asarray(volume, float)
    return MinuteGrid(GridSpec(start, resolution, n), lp, vol, np.ones(n, dtype=bool), "fixture")


def constant_abs_grid(n, c=1e-3, start=MONDAY, resolution=MINUTE, volume=1.0):
    """Log price alternating between two levels, so every |return| is identical."""
    lp = np.where(np.arange(n) % 2 == 0, 9.0, 9.0 + c)
    vol = np.full(n, float(volume))
    return MinuteGrid(GridSpec(start, resolution, n), lp, vol, np.ones(n, dtype=bool), "constant")


@pytest.fixture(scope="session")
def synthetic_grid():
    return simulate_periodic_grid(SyntheticSpec(length_weeks=3, seed=11))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
