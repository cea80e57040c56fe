"""Pool valuation, the no-arbitrage bound on fee income, and delta hedging.

Restricted to one risky asset priced against a numeraire.  For a geometric-mean
pool with weight theta the value of the reserves, marked at an external price s
and assuming arbitrageurs keep the pool aligned, admits the closed form

    value(s) = value(s0) * (s / s0)**theta

which is concave in s.  A liquidity position is therefore short convexity, and
an LP who delta-hedges it can only break even if fee income arrives at least at
the rate

    theta*(1-theta)/2 * sigma**2 * value(s)  -  r * theta * value(s)

per unit time (the second term is the funding cost of the hedge; it vanishes at
r = 0).  Fee income above that rate would hand the hedged LP a riskless profit,
so the rate is an upper bound for any arbitrage-free market.

All functions here are pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "MarketParams",
    "ValuationRef",
    "pool_value_closed_form",
    "pool_value_mark_to_market",
    "fee_bound_rate",
    "fee_income_bound",
    "delta_hedge_ratio",
    "hedged_wealth_step",
]


@dataclass(frozen=True, slots=True)
class MarketParams:
    """External (reference market) price dynamics: s0, volatility, drift, rate."""

    s0: float
    sigma: float
    mu: float = 0.0
    r: float = 0.0

    def __post_init__(self) -> None:
        if not self.s0 > 0.0:
            raise ValueError(f"s0 must be positive, got {self.s0}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma cannot be negative, got {self.sigma}")
        if self.r < 0.0:
            raise ValueError(f"r cannot be negative, got {self.r}")


@dataclass(frozen=True, slots=True)
class ValuationRef:
    """Anchors the closed-form pool value: value0 at price s0, pool weight theta."""

    value0: float
    s0: float
    theta: float

    def __post_init__(self) -> None:
        if not self.value0 > 0.0:
            raise ValueError(f"value0 must be positive, got {self.value0}")
        if not self.s0 > 0.0:
            raise ValueError(f"s0 must be positive, got {self.s0}")
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")


def _require_positive_price(s: float) -> None:
    if not s > 0.0:
        raise ValueError(f"price must be positive, got {s}")


def pool_value_closed_form(ref: ValuationRef, s: float) -> float:
    """Pool value at price s assuming the pool tracked the price: value0*(s/s0)**theta."""
    _require_positive_price(s)
    return ref.value0 * (s / ref.s0) ** ref.theta


def pool_value_mark_to_market(pool, s: float) -> float:
    """Reserves marked at the external price: x1 + s * x2 (numeraire units)."""
    _require_positive_price(s)
    return pool.x1 + s * pool.x2


def fee_bound_rate(value: float, theta: float, sigma: float, r: float = 0.0) -> float:
    """No-arbitrage fee-income rate for a given pool value (numeraire / unit time)."""
    return 0.5 * theta * (1.0 - theta) * sigma * sigma * value - r * theta * value


def fee_income_bound(ref: ValuationRef, s: float, params: MarketParams) -> float:
    """Bound evaluated on the closed-form pool value at price s."""
    value = pool_value_closed_form(ref, s)
    return fee_bound_rate(value, ref.theta, params.sigma, params.r)


def delta_hedge_ratio(ref: ValuationRef, s: float) -> float:
    """Risky-asset position that hedges the pool value: -theta * value(s) / s.

    Always negative (a short), since the pool value is increasing in s.
    """
    return -ref.theta * pool_value_closed_form(ref, s) / s


def hedged_wealth_step(
    z: float,
    s_prev: float,
    s_next: float,
    ref: ValuationRef,
    fee_income: float,
    r: float,
    dt: float,
) -> float:
    """One step of the hedged-LP wealth process.

    The agent holds the pool position plus the hedge set at the start of the
    step, earns interest on uninvested wealth, and receives fee_income over
    the step.  With fee income streamed exactly at the bound rate, the wealth
    stays at zero up to discretisation error.
    """
    _require_positive_price(s_prev)
    _require_positive_price(s_next)
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    delta = delta_hedge_ratio(ref, s_prev)
    dz = (
        pool_value_closed_form(ref, s_next)
        - pool_value_closed_form(ref, s_prev)
        + delta * (s_next - s_prev)
        + (z - delta * s_prev) * r * dt
        + fee_income
    )
    return z + dz
