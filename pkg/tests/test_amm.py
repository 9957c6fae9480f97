import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cryptoperiod.amm import PoolState, average_price, slippage, spot_price, swap_out

mpmath.mp.dps = 50


def _mp_swap(x, y, fee, x_in):
    X, Y, f, a = (mpmath.mpf(v) for v in (x, y, fee, x_in))
    y_out = Y - X * Y / (X + (1 - f) * a)
    return y_out, a / y_out


def test_spot_price_examples():
    assert spot_price(PoolState(20000, 10)) == 2000
    assert spot_price(PoolState(1, 1, 0)) == 1
    assert spot_price(PoolState(21000, 9.6)) == pytest.approx(2187.5, rel=1e-15)


def test_swap_examples():
    y, pool = swap_out(PoolState(20000, 10, 0.0), 20000)
    assert y == pytest.approx(5.0, rel=1e-15)
    assert pool.reserve_x == 40000 and pool.reserve_y == pytest.approx(5.0)
    y, _ = swap_out(PoolState(20000, 10, 0.003), 20000)
    assert y == pytest.approx(10 - 200000 / (20000 + 0.997 * 20000), rel=1e-14)
    assert y == pytest.approx(4.992488, abs=1e-6)
    assert average_price(PoolState(20000, 10), 20000) == pytest.approx(4006.018, abs=1e-3)
    assert slippage(PoolState(20000, 10), 20000) == pytest.approx(0.997, rel=1e-14)
    assert slippage(PoolState(20000, 10, 0.0), 20000) == pytest.approx(1.0, rel=1e-14)


def test_small_trade_limits():
    pool = PoolState(20000, 10, 0.003)
    y, _ = swap_out(pool, 1e-9)
    assert y == pytest.approx(0.997 * 10 / 20000 * 1e-9, rel=1e-9)
    assert average_price(pool, 1e-9) == pytest.approx(20000 / 10 / 0.997, rel=1e-9)
    assert average_price(PoolState(20000, 10, 0.0), 1e-9) == pytest.approx(2000, rel=1e-9)
    assert slippage(pool, 1e-12) < 1e-15


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_non_positive_trade_rejected(bad):
    with pytest.raises(ValueError):
        swap_out(PoolState(1, 1), bad)
    with pytest.raises(ValueError):
        average_price(PoolState(1, 1), bad)


def test_invalid_pools():
    for args in [(0, 1), (1, -1), (1, 1, 1.0), (1, 1, -0.1), (1e200, 1e200)]:
        with pytest.raises(ValueError):
            PoolState(*args)


pools = st.tuples(
    st.floats(1e-3, 1e9), st.floats(1e-3, 1e9), st.floats(0, 0.05), st.floats(1e-6, 10)
)


@given(pools)
def test_against_high_precision_oracle(p):
    x, y, fee, rel = p
    pool = PoolState(x, y, fee)
    x_in = rel * x
    y_ref, avg_ref = _mp_swap(x, y, fee, x_in)
    y_out, new = swap_out(pool, x_in)
    assert abs(y_out - float(y_ref)) <= 1e-12 * float(y_ref)
    assert abs(average_price(pool, x_in) - float(avg_ref)) <= 1e-12 * float(avg_ref)
    assert 0 < y_out < y
    assert new.reserve_x == x + x_in


@given(pools)
def test_fee_accretes_to_reserves(p):
    x, y, fee, rel = p
    pool = PoolState(x, y, max(fee, 1e-4))
    _, new = swap_out(pool, rel * x)
    assert new.k > pool.k


@given(st.floats(1e-3, 1e6), st.floats(1e-3, 1e6), st.floats(0, 0.05), st.floats(1e-6, 5), st.floats(1.01, 3))
def test_monotone_in_trade_size(x, y, fee, rel, factor):
    pool = PoolState(x, y, fee)
    a, b = rel * x, rel * x * factor
    assert swap_out(pool, b)[0] > swap_out(pool, a)[0]
    assert average_price(pool, b) > average_price(pool, a)
    assert slippage(pool, b) > slippage(pool, a)


@given(st.floats(1e-3, 1e6), st.floats(1e-3, 1e6), st.floats(0, 0.05), st.floats(1e-6, 5))
def test_average_price_consistency(x, y, fee, rel):
    pool = PoolState(x, y, fee)
    x_in = rel * x
    y_out, _ = swap_out(pool, x_in)
    assert average_price(pool, x_in) * y_out == pytest.approx(x_in, rel=1e-12)
    adj = spot_price(pool) / (1 - fee)
    assert average_price(pool, x_in) / adj - 1 == pytest.approx(slippage(pool, x_in), rel=1e-9, abs=1e-15)
