"""
Calendar profiles of volatility, volume and illiquidity
========================================================

Simulate 35 weeks of one-minute bars with a quiet weekend, a quiet early
morning (UTC) and bursts at the quarter hours, then recover each pattern
with the relative profiles.
"""

import numpy as np

from cryptoperiod import ingest, periodicity

# calendar factors; every vector is rescaled to geometric mean one
days = ingest.normalize_factors([1.1, 1.1, 1.1, 1.1, 1.15, 0.75, 0.8])
hours = ingest.normalize_factors(1 + 0.35 * np.cos(2 * np.pi * (np.arange(24) - 16) / 24))
minutes = np.ones(60)
minutes[[0, 15, 30, 45]] = [2.5, 1.6, 1.6, 1.6]
minutes = ingest.normalize_factors(minutes)

spec = ingest.SyntheticSpec(
    length_weeks=35, day_factors=days, hour_factors=hours, minute_factors=minutes,
    volume_hour_factors=hours, seed=7,
)
grid = ingest.simulate_periodic_grid(spec)
print(len(grid), "one-minute slots")

# day of week: lambda near 1 in the week, well below 1 on Saturday and Sunday
day = periodicity.relative_day_profile(grid)
for name, lam, lo, hi in zip("Mon Tue Wed Thu Fri Sat Sun".split(), day.lam, day.ci_low, day.ci_high):
    print(f"{name}  {lam:.3f}  [{lo:.3f}, {hi:.3f}]")

# hour of day: peak near 16 UTC, trough in the early UTC morning
hour = periodicity.relative_hour_profile(grid)
print("busiest hour", int(np.argmax(hour.lam)), "quietest hour", int(np.argmin(hour.lam)))

# minute of hour: the four quarter-hour minutes rank highest
minute = periodicity.relative_minute_profile(grid)
print("top minutes", sorted(np.argsort(minute.lam)[-4:].tolist()))

# volume follows the same hourly shape, so illiquidity stays close to 1
illiq = periodicity.relative_illiquidity_hour(grid)
print("illiquidity range", np.round([illiq.lam.min(), illiq.lam.max()], 3))

# hour-of-day levels within each weekday, each row averaging one
cond = periodicity.hour_by_weekday(grid)
print("Saturday row mean", round(cond.matrix[5].mean(), 6), "peak hour", int(np.argmax(cond.matrix[5])))
