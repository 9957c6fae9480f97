"""
Day-of-week effects in daily volatility models
===============================================

Simulate daily returns whose variance dips on weekends and whose realized
variance is observed, then compare GARCH, EGARCH and the periodic EGARCH-X
in sample and out of sample.
"""

import numpy as np

from cryptoperiod import garch

weekend = np.array([0.15, 0.1, 0.1, 0.1, 0.25, -0.4, -0.3])
truth = garch.GarchParams(
    mu=0.03, omega=0.02, alpha=0.08, beta=0.95, tau=-0.04, gamma=0.3, lambda_d=weekend
)
model = garch.ModelSpec("EGARCHX", periodic=True)
data = garch.simulate_returns(model, truth, 2500, seed=3)

# estimate on the first 2000 days and score the last 500 at fixed parameters
split = 2000
for spec in (garch.ModelSpec("GARCH"), garch.ModelSpec("EGARCH"), model):
    fit = garch.fit(spec, data, in_sample=split)
    print(f"{spec.label:10s} loglik in {fit.loglik_in:9.1f}  out {garch.score_out_of_sample(fit, data):8.1f}")

# the weekday factors with sandwich standard errors; they add up to zero
se = fit.std_errors
for d, name in enumerate("Mon Tue Wed Thu Fri Sat Sun".split()):
    print(f"lambda {name}  {fit.params.lambda_d[d]:+.3f}  (se {se[f'lambda_{d + 1}']:.3f})  truth {weekend[d]:+.2f}")
print("sum", fit.params.lambda_d.sum())

# one-step-ahead annualized volatility (percent) over the hold-out span
path = garch.forecast_variance(fit, data, start=split)
print("mean annualized vol", round(float(path.annualized_vol.mean()), 1), "%")
