"""
Slippage in a constant-product pool
===================================

Quote swaps of growing size against a pool holding 20000 USDC and 10 ETH.
"""

import numpy as np

from cryptoperiod import amm

pool = amm.PoolState(reserve_x=20_000.0, reserve_y=10.0, fee=0.003)
print("spot price", amm.spot_price(pool), "USDC per ETH")

# the average price paid rises with the trade's share of the reserve
for x_in in (100.0, 1_000.0, 5_000.0, 20_000.0, 100_000.0):
    y_out, after = amm.swap_out(pool, x_in)
    print(
        f"in {x_in:>9.0f}  out {y_out:.6f}  avg price {amm.average_price(pool, x_in):9.3f}"
        f"  slippage {100 * amm.slippage(pool, x_in):6.2f}%  new spot {amm.spot_price(after):9.2f}"
    )

# fees stay in the pool, so the reserve product never falls
sizes = np.geomspace(1, 1e6, 50)
print("product grows:", all(amm.swap_out(pool, s)[1].k >= pool.k for s in sizes))
