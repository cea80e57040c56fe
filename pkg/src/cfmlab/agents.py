"""Trading agents: a myopic arbitrageur and a price-sensitive noise trader.

The arbitrageur sees the pool and a frictionless reference market quoting the
risky asset at s.  Buying from the pool and selling at s (or the reverse) is
profitable only when the pool's marginal price has drifted far enough from s
to beat the fee.  Charging the fee on top of the deposit makes the all-in cost
of a deposit d equal to (2 - gamma) * d, so with c = 2 - gamma the no-trade
band is

    s / c  <=  spot price  <=  s * c.

Outside the band the optimal one-shot trade lands the pool exactly on the
nearer band edge; for a geometric-mean pool the optimiser is available in
closed form for any weight theta (see solve_arbitrage).

The noise trader arrives by a Poisson clock, draws a signed trade size, and
routes to whichever venue executes cheaper, with a configurable chance of
picking the wrong one.  All randomness is injected by the caller, so both
agents are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

from .pool import (
    BUY_ASSET_1,
    BUY_ASSET_2,
    InfeasibleTradeError,
    PoolState,
    SwapQuote,
    invariant,
    quote_swap,
    spot_price,
)

__all__ = [
    "ArbDecision",
    "NoiseTraderParams",
    "NoiseDecision",
    "solve_arbitrage",
    "sample_arrival",
    "noise_route",
    "quote_for_noise",
]

# Relative half-width added to the no-trade band so that a pool sitting on a
# band edge (where the previous arbitrage left it) is not re-traded on float
# noise.  Well below any economically meaningful gap.
BAND_RTOL = 1e-13

Venue = Literal["cfm", "reference"]
NoiseSide = Literal["buy_asset_2", "sell_asset_2"]


@dataclass(frozen=True, slots=True)
class ArbDecision:
    """Outcome of the arbitrage optimisation.

    quote is the pool leg (None when no profitable trade exists) and
    reference_leg the signed risky-asset quantity traded at the reference
    price (positive = buy there, negative = sell there).  expected_profit is
    in numeraire units; opportunities too small to resolve in double
    precision report 0.0.
    """

    quote: Optional[SwapQuote]
    reference_leg: float
    expected_profit: float


_NO_TRADE = ArbDecision(quote=None, reference_leg=0.0, expected_profit=0.0)


def solve_arbitrage(pool: PoolState, s: float) -> ArbDecision:
    """Profit-maximising one-shot trade against the pool at reference price s.

    With c = 2 - gamma the deposit cost multiplier, the first-order condition
    puts the post-trade spot price on the band edge, which pins the post-trade
    reserve directly:

        buy asset 2 from the pool  (spot * c < s):  x1' = k * (theta*s / ((1-theta)*c))**(1-theta)
        sell asset 2 to the pool   (spot > s * c):  x2' = k * ((1-theta) / (theta*c*s))**theta

    where k is the invariant level.  For theta = 1/2 these reduce to
    sqrt(s*k**2/c) and sqrt(k**2/(c*s)).  Inside the band returns no-trade.
    """
    if not s > 0.0:
        raise ValueError(f"reference price must be positive, got {s}")

    theta = pool.theta
    c = 2.0 - pool.gamma
    spot = (1.0 - theta) * pool.x1 / (theta * pool.x2)

    if spot * c < s * (1.0 - BAND_RTOL):
        # Pool sells asset 2 cheap: deposit numeraire, sell the output at s.
        k = invariant(pool)
        x1_new = k * (theta * s / ((1.0 - theta) * c)) ** (1.0 - theta)
        deposit = x1_new - pool.x1
        if deposit <= 0.0:
            return _NO_TRADE
        quote = quote_swap(pool, BUY_ASSET_2, deposit, "exact_in")
        profit = s * quote.amount_out - (quote.amount_in + quote.fee)
        return ArbDecision(
            quote=quote,
            reference_leg=-quote.amount_out,
            expected_profit=max(profit, 0.0),
        )

    if spot > c * s * (1.0 + BAND_RTOL):
        # Pool buys asset 2 dear: buy (deposit + fee) at s, withdraw numeraire.
        k = invariant(pool)
        x2_new = k * ((1.0 - theta) / (theta * c * s)) ** theta
        deposit = x2_new - pool.x2
        if deposit <= 0.0:
            return _NO_TRADE
        quote = quote_swap(pool, BUY_ASSET_1, deposit, "exact_in")
        profit = quote.amount_out - s * (quote.amount_in + quote.fee)
        return ArbDecision(
            quote=quote,
            reference_leg=quote.amount_in + quote.fee,
            expected_profit=max(profit, 0.0),
        )

    return _NO_TRADE


@dataclass(frozen=True, slots=True)
class NoiseTraderParams:
    """Poisson arrival intensity, venue-choice rationality, and size scale."""

    lam: float
    p: float = 0.9
    size_std: float = 1.0

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not self.size_std > 0.0:
            raise ValueError(f"size_std must be positive, got {self.size_std}")


@dataclass(frozen=True, slots=True)
class NoiseDecision:
    """Routed noise trade: venue, direction, and numeraire size (0 = no-op)."""

    venue: Venue
    side: NoiseSide
    size: float


def sample_arrival(lam: float, dt: float, u: float) -> bool:
    """Bernoulli arrival over one step: u < 1 - exp(-lam*dt).

    Exact per-step marginal of a Poisson clock, at most one arrival per step.
    """
    if dt < 0.0:
        raise ValueError(f"dt cannot be negative, got {dt}")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"u must lie in [0, 1), got {u}")
    return u < -math.expm1(-lam * dt)


def _cfm_buy_price(pool: PoolState, size: float) -> Optional[float]:
    """All-in numeraire paid per unit of asset 2 when depositing `size`."""
    quote = quote_swap(pool, BUY_ASSET_2, size, "exact_in")
    if quote.amount_out <= 0.0:
        return None
    return (quote.amount_in + quote.fee) / quote.amount_out


def _cfm_sell_price(pool: PoolState, size: float) -> Optional[float]:
    """Numeraire received per unit of asset 2 (fee included) for `size` out."""
    try:
        quote = quote_swap(pool, BUY_ASSET_1, size, "exact_out")
    except InfeasibleTradeError:
        return None
    all_in = quote.amount_in + quote.fee
    if all_in <= 0.0:
        return None
    return size / all_in


def noise_route(
    pool: PoolState,
    s: float,
    raw_size: float,
    u_rational: float,
    p: float,
) -> NoiseDecision:
    """Route one noise trade between the pool and the reference market.

    The sign of raw_size picks the direction (positive buys asset 2), its
    magnitude is the numeraire amount traded.  The trader compares the pool's
    all-in execution price (slippage plus fee) with the frictionless reference
    price and picks the better venue with probability p, the other with
    probability 1 - p.  Ties, zero sizes, and sizes beyond the pool's
    feasibility cap go to the reference market.
    """
    if not s > 0.0:
        raise ValueError(f"reference price must be positive, got {s}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if not 0.0 <= u_rational < 1.0:
        raise ValueError(f"u_rational must lie in [0, 1), got {u_rational}")

    size = abs(raw_size)
    if size == 0.0:
        return NoiseDecision(venue="reference", side="buy_asset_2", size=0.0)

    if raw_size > 0.0:
        side: NoiseSide = "buy_asset_2"
        cfm_price = _cfm_buy_price(pool, size)
        cfm_better = cfm_price is not None and cfm_price < s
    else:
        side = "sell_asset_2"
        cfm_price = _cfm_sell_price(pool, size)
        cfm_better = cfm_price is not None and cfm_price > s

    if cfm_price is None:
        # Infeasible on the pool: the reference market is the only venue.
        return NoiseDecision(venue="reference", side=side, size=size)
    if cfm_price == s:
        # Exact tie: no better venue exists, deterministic reference routing.
        return NoiseDecision(venue="reference", side=side, size=size)

    rational = u_rational < p
    cfm_chosen = cfm_better if rational else not cfm_better
    return NoiseDecision(venue="cfm" if cfm_chosen else "reference", side=side, size=size)


def quote_for_noise(pool: PoolState, decision: NoiseDecision) -> Optional[SwapQuote]:
    """Pool quote implementing a CFM-routed noise decision (None if off-pool)."""
    if decision.venue != "cfm" or decision.size == 0.0:
        return None
    if decision.side == "buy_asset_2":
        return quote_swap(pool, BUY_ASSET_2, decision.size, "exact_in")
    return quote_swap(pool, BUY_ASSET_1, decision.size, "exact_out")
