"""cfmlab: a simulation laboratory for constant function markets.

Building blocks: geometric-mean pool mechanics (`pool`), valuation and the
no-arbitrage fee-income bound (`valuation`), arbitrage and noise-trader agents
(`agents`), the Monte Carlo engine (`engine`), self-checking property suites
(`verification`), and a command-line front end (`cli`).
"""

from .agents import (
    ArbDecision,
    NoiseDecision,
    NoiseTraderParams,
    noise_route,
    quote_for_noise,
    sample_arrival,
    solve_arbitrage,
)
from .engine import (
    AggregateCell,
    ConfigError,
    HedgeReport,
    PathResult,
    SimConfig,
    StepRecord,
    gbm_step,
    run_path,
    run_sweep,
    verify_hedge,
)
from .pool import (
    BUY_ASSET_1,
    BUY_ASSET_2,
    InfeasibleTradeError,
    PoolState,
    StaleQuoteError,
    SwapQuote,
    apply_swap,
    invariant,
    quote_swap,
    spot_price,
)
from .valuation import (
    MarketParams,
    ValuationRef,
    delta_hedge_ratio,
    fee_bound_rate,
    fee_income_bound,
    hedged_wealth_step,
    pool_value_closed_form,
    pool_value_mark_to_market,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # pool
    "PoolState", "SwapQuote", "InfeasibleTradeError", "StaleQuoteError",
    "BUY_ASSET_1", "BUY_ASSET_2",
    "invariant", "spot_price", "quote_swap", "apply_swap",
    # valuation
    "MarketParams", "ValuationRef",
    "pool_value_closed_form", "pool_value_mark_to_market",
    "fee_bound_rate", "fee_income_bound", "delta_hedge_ratio", "hedged_wealth_step",
    # agents
    "ArbDecision", "NoiseTraderParams", "NoiseDecision",
    "solve_arbitrage", "sample_arrival", "noise_route", "quote_for_noise",
    # engine
    "ConfigError", "SimConfig", "StepRecord", "PathResult", "AggregateCell",
    "HedgeReport", "gbm_step", "run_path", "run_sweep", "verify_hedge",
]
