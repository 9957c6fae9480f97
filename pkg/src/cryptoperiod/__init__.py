"""High-frequency periodicity toolkit for crypto-asset returns.

Modules
-------
timegrid     calendar coordinates on a regular UTC grid
ingest       OHLCV and AMM block loaders, synthetic periodic grids
amm          constant-product pool pricing
measures     returns, realized variance, correlation functions
periodicity  relative volatility, volume and illiquidity profiles
garch        periodic GARCH-family models
cli          command-line front end
"""
__version__ = "0.1.0"
