import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cryptoperiod.ingest import MinuteGrid
from cryptoperiod.measures import (
    annualized_vol,
    correlation_matrix,
    cross_correlation,
    log_returns,
    realized_variance,
    slot_returns,
)
from cryptoperiod.timegrid import MINUTE, SECOND, GridSpec

MIDNIGHT = 1601510400  # Thursday 2020-10-01 00:00 UTC


def _grid(lp, start=MIDNIGHT, observed=None, res=MINUTE):
    lp = np.asarray(lp, float)
    obs = np.ones(len(lp), bool) if observed is None else np.asarray(observed)
    return MinuteGrid(GridSpec(start, res, len(lp)), lp, np.ones(len(lp)), obs)


def test_slot_returns_convention():
    g = _grid([0.0, 0.1, 0.3, 0.3], observed=[True, True, False, True])
    y = slot_returns(g)
    assert np.isnan(y[0])
    np.testing.assert_allclose(y[1:], [0.1, 0.2, 0.0])
    y = slot_returns(g, exclude_filled=True)
    assert np.isnan(y[2]) and np.isnan(y[3]) and y[1] == pytest.approx(0.1)


def test_log_returns_step():
    lp = np.cumsum(np.arange(10.0))
    r = log_returns(_grid(lp), step_minutes=3)
    np.testing.assert_allclose(r.values, lp[3:] - lp[:-3])
    assert len(r) == 7
    with pytest.raises(ValueError):
        log_returns(_grid(lp), 10)


def _rv_oracle(lp, day):
    """RV of ``day`` for a grid starting at midnight, by direct enumeration."""
    def price(b):
        return lp[b - 1] if b > 0 else lp[0]

    base = 1440 * day
    return math.fsum((price(base + 5 * (j + 1)) - price(base + 5 * j)) ** 2 for j in range(288))


def test_realized_variance_matches_enumeration(rng):
    lp = np.cumsum(rng.normal(0, 1e-3, 3 * 1440))
    out = realized_variance(_grid(lp))
    assert len(out.rv) == 3
    for d in range(3):
        assert out.rv[d] == pytest.approx(_rv_oracle(lp, d), rel=1e-14)
    np.testing.assert_array_equal(out.n_returns, 288)
    # the first day borrows its opening price from the first close
    np.testing.assert_array_equal(out.complete, [False, True, True])
    assert str(out.day_index[0]) == "2020-10-01"


def test_realized_variance_mid_day_start(rng):
    start = MIDNIGHT + 600 * 60  # 10:00
    lp = np.cumsum(rng.normal(0, 1e-3, 2 * 1440))
    out = realized_variance(_grid(lp, start=start))
    assert not out.complete[0] and out.n_returns[0] < 288
    assert out.complete[1]
    # day 2 runs from boundary 1440-600 of the grid
    off = 1440 - 600
    ref = math.fsum((lp[off + 5 * (j + 1) - 1] - lp[off + 5 * j - 1]) ** 2 for j in range(288))
    assert out.rv[1] == pytest.approx(ref, rel=1e-14)


def test_realized_variance_requires_minutes():
    with pytest.raises(ValueError):
        realized_variance(_grid(np.zeros(100), res=SECOND))


def test_annualized_vol():
    assert annualized_vol(1 / 365) == 100.0
    np.testing.assert_allclose(annualized_vol(np.array([0.0, 4 / 365])), [0.0, 200.0])
    with pytest.raises(ValueError):
        annualized_vol(-1.0)


def _brute_corr(x, y, h):
    if h >= 0:
        a, b = x[: len(x) - h], y[h:]
    else:
        a, b = x[-h:], y[: len(y) + h]
    return np.corrcoef(a, b)[0, 1], len(a)


def test_cross_correlation_brute_force(rng):
    x = rng.standard_normal(2000)
    y = np.roll(x, 2) + rng.standard_normal(2000)
    a = log_returns(_grid(np.cumsum(x)))
    b = log_returns(_grid(np.cumsum(y)))
    cf = cross_correlation(a, b, 10, two_sided=True)
    np.testing.assert_array_equal(cf.lags, np.arange(-10, 11))
    for h, r, n, band in zip(cf.lags, cf.rho, cf.n, cf.band_halfwidth):
        ref, m = _brute_corr(a.values, b.values, h)
        assert r == pytest.approx(ref, abs=1e-12)
        assert n == m and band == pytest.approx(1.96 / math.sqrt(m))
    assert 2 in cf.significant()
    assert cf.metadata["band"].startswith("white-noise")


def test_cross_correlation_guards(rng):
    a = log_returns(_grid(np.cumsum(rng.standard_normal(100))))
    with pytest.raises(ValueError):
        cross_correlation(a, a, 10)
    other = log_returns(_grid(np.cumsum(rng.standard_normal(101))))
    with pytest.raises(ValueError):
        cross_correlation(a, other, 2)
    flat = log_returns(_grid(np.zeros(100)))
    with pytest.raises(ValueError):
        cross_correlation(flat, flat, 2)


def test_nan_pairs_are_skipped(rng):
    lp = np.cumsum(rng.standard_normal(500))
    obs = np.ones(500, bool)
    obs[100:110] = False
    a = log_returns(_grid(lp, observed=obs), exclude_filled=True)
    cf = cross_correlation(a, a, 3)
    assert cf.rho[0] == 1.0
    assert cf.n[0] == np.isfinite(a.values).sum()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(50, 400))
def test_correlations_bounded(seed, n):
    g = np.random.default_rng(seed)
    a = log_returns(_grid(np.cumsum(g.standard_normal(n))))
    b = log_returns(_grid(np.cumsum(g.standard_normal(n))))
    cf = cross_correlation(a, b, n // 20)
    assert np.all(np.abs(cf.rho) <= 1.0)
    acf = cross_correlation(a, a, n // 20)
    assert acf.rho[0] == pytest.approx(1.0, abs=1e-14)


def test_correlation_matrix(rng):
    base = rng.standard_normal(1000)
    series = [log_returns(_grid(np.cumsum(base + s * rng.standard_normal(1000)))) for s in (0.1, 0.5, 2.0)]
    m = correlation_matrix(series)
    np.testing.assert_allclose(np.diag(m), 1.0)
    np.testing.assert_allclose(m, m.T)
    assert m[0, 1] > m[0, 2] > 0
    with pytest.raises(ValueError):
        correlation_matrix(series[:1])
