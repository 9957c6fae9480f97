"""
Lead and lag between two venues
===============================

A "slow" venue whose price follows the average of a "fast" venue's last
three one-minute returns shows up as positive cross-correlation at lags one
to three.
"""

import numpy as np

from cryptoperiod import ingest, measures
from cryptoperiod.timegrid import GridSpec

rng = np.random.default_rng(0)
n = 50_000
fast = rng.standard_normal(n + 3) * 1e-3
slow = (fast[2:-1] + fast[1:-2] + fast[:-3]) / 3 + rng.standard_normal(n) * 1e-3


def grid_of(returns):
    """Wrap cumulated returns as a one-minute grid starting on a Monday."""
    log_price = np.concatenate([[0.0], np.cumsum(returns)]) + np.log(100.0)
    spec = GridSpec(1_601_856_000, 60, len(log_price))
    return ingest.MinuteGrid(spec, log_price, np.ones(len(log_price)), np.ones(len(log_price), bool))


a = measures.log_returns(grid_of(fast[3:]))
b = measures.log_returns(grid_of(slow))

# rho(h) = corr(fast_i, slow_{i+h}); the band is the white-noise 1.96 / sqrt(n)
cc = measures.cross_correlation(a, b, max_lag=10)
for h, rho, band in zip(cc.lags, cc.rho, cc.band_halfwidth):
    print(f"lag {h:2d}  rho {rho:+.4f}  {'*' if abs(rho) > band else ''}")

# each lag beyond 3 crosses its band with probability 5% when there is no
# dependence, so an occasional star there (lag 9 with this seed) is chance
