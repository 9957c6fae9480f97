"""Constant-product (x * y = k) pool arithmetic in double precision.

Prices are quoted as units of the input token X per unit of the output
token Y, so a pool holding 20,000 USDC and 10 ETH has spot price 2,000.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["PoolState", "UNISWAP_V2_FEE", "spot_price", "swap_out", "average_price", "slippage"]

UNISWAP_V2_FEE = 0.003


@dataclass(frozen=True)
class PoolState:
    reserve_x: float
    reserve_y: float
    fee: float = UNISWAP_V2_FEE

    def __post_init__(self):
        if not (self.reserve_x > 0 and self.reserve_y > 0):
            raise ValueError("pool reserves must be strictly positive")
        if not 0 <= self.fee < 1:
            raise ValueError("fee must lie in [0, 1)")
        if not math.isfinite(self.reserve_x * self.reserve_y):
            raise ValueError("reserve product is not finite")

    @property
    def k(self) -> float:
        return self.reserve_x * self.reserve_y


def _check_amount(x_in: float) -> None:
    if not x_in > 0:
        raise ValueError(f"x_in must be positive, got {x_in}")


def spot_price(pool: PoolState) -> float:
    return pool.reserve_x / pool.reserve_y


def swap_out(pool: PoolState, x_in: float) -> tuple[float, PoolState]:
    """Amount of Y received for ``x_in`` of X, and the pool after the swap.

    The fee is withheld from the input before it moves along the curve but
    the full ``x_in`` is added to the reserves, so ``k`` grows when fee > 0.
    """
    _check_amount(x_in)
    X, Y = pool.reserve_x, pool.reserve_y
    effective = (1.0 - pool.fee) * x_in
    # Y - K/(X + e) rewritten as Y*e/(X + e) to avoid cancellation for tiny trades.
    y_out = Y * effective / (X + effective)
    return y_out, PoolState(X + x_in, Y - y_out, pool.fee)


def average_price(pool: PoolState, x_in: float) -> float:
    """Realised price ``x_in / y_out`` of a swap."""
    y_out, _ = swap_out(pool, x_in)
    return x_in / y_out


def slippage(pool: PoolState, x_in: float) -> float:
    """Relative excess of the average price over the fee-adjusted spot price.

    Equals ``(x_in / X) * (1 - fee)``.
    """
    _check_amount(x_in)
    return (x_in / pool.reserve_x) * (1.0 - pool.fee)
