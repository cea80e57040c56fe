"""Geometric-mean market maker: pool state, swap quoting, and fee accounting.

The pool holds reserves (x1, x2) of a numeraire asset and a risky asset and
accepts any trade that keeps the level of the trading function

    x1**theta * x2**(1 - theta)

unchanged.  theta = 1/2 is the familiar constant-product pool.  A proportional
fee (1 - gamma) is charged on the *input* asset, paid on top of the deposit,
and kept in a separate ledger: fees never enter the reserves, so the invariant
level is genuinely constant across trades.

All quantities are double-precision reals; this models the idealised pool, not
an on-chain fixed-point implementation.  Every operation takes a state in and
returns a new state out, so the module is safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

__all__ = [
    "Side",
    "BUY_ASSET_2",
    "BUY_ASSET_1",
    "PoolState",
    "SwapQuote",
    "InfeasibleTradeError",
    "StaleQuoteError",
    "invariant",
    "spot_price",
    "quote_swap",
    "apply_swap",
]

# Trade direction, named after the asset the trader withdraws from the pool.
Side = Literal["buy_asset_2", "buy_asset_1"]
BUY_ASSET_2: Side = "buy_asset_2"  # deposit asset 1, withdraw asset 2
BUY_ASSET_1: Side = "buy_asset_1"  # deposit asset 2, withdraw asset 1

# Reject exact-out requests at or above this fraction of the output reserve;
# quotes explode numerically as the reserve drains.
MAX_OUTPUT_FRACTION = 0.99

# Allowed relative drift of the invariant across a single swap application.
INVARIANT_RTOL = 1e-12


class InfeasibleTradeError(ValueError):
    """Requested output would exhaust (or nearly exhaust) a reserve."""


class StaleQuoteError(RuntimeError):
    """Quote does not preserve the invariant of the pool it is applied to."""


@dataclass(frozen=True, slots=True)
class PoolState:
    """Immutable snapshot of pool reserves, parameters, and fee ledgers.

    fees_collected_1/2 accumulate the input-asset fees of past swaps.  They
    are bookkeeping only and never contribute to pricing.
    """

    x1: float
    x2: float
    theta: float = 0.5
    gamma: float = 1.0
    fees_collected_1: float = 0.0
    fees_collected_2: float = 0.0

    def __post_init__(self) -> None:
        if not self.x1 > 0.0 or not self.x2 > 0.0:
            raise ValueError(f"reserves must be positive, got x1={self.x1}, x2={self.x2}")
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.fees_collected_1 < 0.0 or self.fees_collected_2 < 0.0:
            raise ValueError("fee ledgers cannot be negative")


@dataclass(frozen=True, slots=True)
class SwapQuote:
    """A priced trade against a specific pool state.

    amount_in is deposited into the pool, amount_out withdrawn, and the fee
    (1 - gamma) * amount_in is owed on top of the deposit in the input asset.
    """

    side: Side
    amount_in: float
    amount_out: float
    fee: float

    def __post_init__(self) -> None:
        if self.amount_in < 0.0 or self.amount_out < 0.0 or self.fee < 0.0:
            raise ValueError("quote amounts cannot be negative")


def invariant(pool: PoolState) -> float:
    """Level of the trading function, x1**theta * x2**(1-theta)."""
    return pool.x1 ** pool.theta * pool.x2 ** (1.0 - pool.theta)


def spot_price(pool: PoolState) -> float:
    """Marginal price of asset 2 in numeraire units, (1-theta) x1 / (theta x2)."""
    return (1.0 - pool.theta) * pool.x1 / (pool.theta * pool.x2)


def quote_swap(pool: PoolState, side: Side, amount: float, mode: str = "exact_in") -> SwapQuote:
    """Price a swap that preserves the invariant, in closed form.

    amount is in units of the asset the trader specifies: the deposit for
    ``exact_in``, the desired withdrawal for ``exact_out``.  Solving the
    invariant equation for the counter-amount gives

        amount_out = out_reserve * (1 - (in_reserve / (in_reserve + amount_in))**q)
        amount_in  = in_reserve  * ((out_reserve / (out_reserve - amount_out))**(1/q) - 1)

    with q the exponent ratio of the input and output assets.  Both are
    evaluated in log1p/expm1 form, which stays accurate even when the trade
    is a vanishing fraction of a reserve.
    """
    if amount < 0.0:
        raise ValueError(f"swap amount cannot be negative, got {amount}")
    if mode not in ("exact_in", "exact_out"):
        raise ValueError(f"mode must be 'exact_in' or 'exact_out', got {mode!r}")
    if side not in (BUY_ASSET_2, BUY_ASSET_1):
        raise ValueError(f"unknown side {side!r}")

    if amount == 0.0:
        return SwapQuote(side=side, amount_in=0.0, amount_out=0.0, fee=0.0)

    if side == BUY_ASSET_2:
        in_reserve, out_reserve = pool.x1, pool.x2
        ratio = pool.theta / (1.0 - pool.theta)
    else:
        in_reserve, out_reserve = pool.x2, pool.x1
        ratio = (1.0 - pool.theta) / pool.theta

    if mode == "exact_in":
        amount_in = amount
        amount_out = -out_reserve * math.expm1(
            -ratio * math.log1p(amount_in / in_reserve))
    else:
        if amount >= MAX_OUTPUT_FRACTION * out_reserve:
            raise InfeasibleTradeError(
                f"requested output {amount} of reserve {out_reserve} exceeds the "
                f"{MAX_OUTPUT_FRACTION:.0%} feasibility cap"
            )
        amount_out = amount
        amount_in = in_reserve * math.expm1(
            -math.log1p(-amount_out / out_reserve) / ratio)

    # Guard against rounding producing a tiny negative on microscopic trades.
    amount_out = max(amount_out, 0.0)
    amount_in = max(amount_in, 0.0)
    fee = (1.0 - pool.gamma) * amount_in
    return SwapQuote(side=side, amount_in=amount_in, amount_out=amount_out, fee=fee)


def apply_swap(pool: PoolState, quote: SwapQuote) -> PoolState:
    """Execute a quote: move reserves, bank the fee, and return the new state.

    The input reserve grows by exactly amount_in and the fee goes to the
    matching ledger, never to the reserves.  A quote produced against a
    different state fails the invariant check and raises StaleQuoteError.
    """
    if quote.side == BUY_ASSET_2:
        new_x1 = pool.x1 + quote.amount_in
        new_x2 = pool.x2 - quote.amount_out
        fees_1, fees_2 = pool.fees_collected_1 + quote.fee, pool.fees_collected_2
    else:
        new_x1 = pool.x1 - quote.amount_out
        new_x2 = pool.x2 + quote.amount_in
        fees_1, fees_2 = pool.fees_collected_1, pool.fees_collected_2 + quote.fee

    if new_x1 <= 0.0 or new_x2 <= 0.0:
        raise StaleQuoteError("quote drains a reserve; it was not priced against this pool")

    new_pool = replace(pool, x1=new_x1, x2=new_x2,
                       fees_collected_1=fees_1, fees_collected_2=fees_2)
    before = invariant(pool)
    after = invariant(new_pool)
    if abs(after - before) > INVARIANT_RTOL * before:
        raise StaleQuoteError(
            f"invariant moved from {before!r} to {after!r}; quote is stale"
        )
    return new_pool
