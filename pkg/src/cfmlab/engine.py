"""Event loop, Monte Carlo orchestration, and grid aggregation.

Each path advances a reference price by geometric Brownian motion and runs,
per step: price update, then the arbitrageur, then (on Poisson arrival) one
noise trade.  The step records accumulate two series in numeraire terms:

    fee income   f*dt  -- all pool fees collected this step, risky-asset fees
                          converted at the step's reference price;
    bound income b*dt  -- the no-arbitrage fee-income bound evaluated on the
                          post-arbitrage reserves marked at the reference price.

A path's headline number is the accumulated difference D = sum(b*dt) - sum(f*dt):
positive D means the pool's fee income fell short of the cost of hedging the
liquidity position.

Randomness is reproducible by construction: the draws of path i depend only on
(master_seed, i), never on the grid cell, so sweep cells share common random
numbers and any path can be re-run in isolation.  Paths are independent and
the aggregation is ordered, so results do not depend on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .agents import (
    NoiseTraderParams,
    noise_route,
    quote_for_noise,
    sample_arrival,
    solve_arbitrage,
)
from .pool import PoolState, apply_swap, spot_price
from .valuation import ValuationRef, fee_bound_rate, hedged_wealth_step, pool_value_closed_form

__all__ = [
    "ConfigError",
    "SimConfig",
    "StepRecord",
    "PathResult",
    "AggregateCell",
    "HedgeReport",
    "gbm_step",
    "run_path",
    "run_sweep",
    "summarize",
    "verify_hedge",
]


class ConfigError(ValueError):
    """A simulation configuration violates a parameter domain."""


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Full experiment parameterisation (defaults follow the standard setup)."""

    gamma: float
    sigma: float
    lam: float
    theta: float = 0.5
    p: float = 0.9
    r: float = 0.0
    s0: float = 10.0
    x1_0: float = 100.0
    x2_0: float = 10.0
    size_std: float = 1.0
    horizon: float = 1.0
    n_steps: int = 1000
    n_paths: int = 100
    master_seed: int = 0

    def validate(self) -> None:
        checks = [
            (0.0 < self.gamma <= 1.0, "gamma", "must lie in (0, 1]", self.gamma),
            (self.sigma >= 0.0, "sigma", "cannot be negative", self.sigma),
            (self.lam >= 0.0, "lambda", "cannot be negative", self.lam),
            (0.0 < self.theta < 1.0, "theta", "must lie in (0, 1)", self.theta),
            (0.0 <= self.p <= 1.0, "p", "must lie in [0, 1]", self.p),
            (self.r >= 0.0, "r", "cannot be negative", self.r),
            (self.s0 > 0.0, "s0", "must be positive", self.s0),
            (self.x1_0 > 0.0, "x1_0", "must be positive", self.x1_0),
            (self.x2_0 > 0.0, "x2_0", "must be positive", self.x2_0),
            (self.size_std > 0.0, "size_std", "must be positive", self.size_std),
            (self.horizon > 0.0, "horizon", "must be positive", self.horizon),
            (self.n_steps >= 1, "n_steps", "must be at least 1", self.n_steps),
            (self.n_paths >= 1, "n_paths", "must be at least 1", self.n_paths),
            (self.master_seed >= 0, "master_seed", "cannot be negative", self.master_seed),
        ]
        for ok, key, why, value in checks:
            if not ok:
                raise ConfigError(f"invalid config value for {key}: {why} (got {value})")


@dataclass(frozen=True, slots=True)
class StepRecord:
    """Telemetry for one simulation step (state fields are end-of-step)."""

    t: float
    s: float
    pool_price: float
    x1: float
    x2: float
    fee_income: float       # f*dt, numeraire
    bound_income: float     # b*dt, numeraire
    arb_profit: float
    noise_venue: str        # "none" | "cfm" | "reference"
    noise_side: str         # "none" | "buy_asset_2" | "sell_asset_2"
    noise_size: float
    # Diagnostics captured between the arbitrage and noise phases.
    pool_price_after_arb: float
    pool_value_after_arb: float


@dataclass(frozen=True, slots=True)
class PathResult:
    """Accumulated fee income, accumulated bound, and their difference."""

    fees_total: float
    bound_total: float
    diff: float              # bound_total - fees_total, exactly
    n_arb_trades: int
    final_pool: PoolState
    steps: Optional[list[StepRecord]] = None


@dataclass(frozen=True, slots=True)
class AggregateCell:
    """Per-cell summary of the fee shortfall D over a cell's paths."""

    gamma: float
    sigma: float
    lam: float
    mean_diff: float
    std_diff: float
    n_paths: int
    mean_arb_trades: float


def gbm_step(s: float, sigma: float, dt: float, z: float) -> float:
    """Exact driftless GBM transition: s * exp(-sigma^2 dt / 2 + sigma sqrt(dt) z)."""
    if not s > 0.0:
        raise ValueError(f"price must be positive, got {s}")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    return s * math.exp(-0.5 * sigma * sigma * dt + sigma * math.sqrt(dt) * z)


def _path_rng(master_seed: int, path_index: int) -> np.random.Generator:
    # The stream is keyed on (master_seed, path_index) only so that grid cells
    # reuse identical draws (common random numbers).
    return np.random.default_rng([master_seed, path_index])


def run_path(config: SimConfig, path_index: int, record_steps: bool = False) -> PathResult:
    """Simulate one path; deterministic given (master_seed, path_index)."""
    config.validate()
    if path_index < 0:
        raise ConfigError(f"invalid config value for path_index: cannot be negative (got {path_index})")

    n = config.n_steps
    dt = config.horizon / n
    theta, gamma, sigma, r = config.theta, config.gamma, config.sigma, config.r
    noise = NoiseTraderParams(lam=config.lam, p=config.p, size_std=config.size_std) \
        if config.lam > 0.0 else None

    rng = _path_rng(config.master_seed, path_index)
    z_draws = rng.standard_normal(n).tolist()
    u_arrivals = rng.random(n).tolist()
    raw_sizes = rng.standard_normal(n).tolist()
    u_rationals = rng.random(n).tolist()

    pool = PoolState(x1=config.x1_0, x2=config.x2_0, theta=theta, gamma=gamma)
    s = config.s0
    fees_total = 0.0
    bound_total = 0.0
    n_arb = 0
    records: Optional[list[StepRecord]] = [] if record_steps else None

    for i in range(n):
        s = gbm_step(s, sigma, dt, z_draws[i])
        fees_1_before = pool.fees_collected_1
        fees_2_before = pool.fees_collected_2

        decision = solve_arbitrage(pool, s)
        if decision.quote is not None:
            pool = apply_swap(pool, decision.quote)
            n_arb += 1

        value_after_arb = pool.x1 + s * pool.x2
        bound_dt = fee_bound_rate(value_after_arb, theta, sigma, r) * dt
        if record_steps:
            price_after_arb = spot_price(pool)

        noise_venue = "none"
        noise_side = "none"
        noise_size = 0.0
        if noise is not None and sample_arrival(noise.lam, dt, u_arrivals[i]):
            nd = noise_route(pool, s, raw_sizes[i] * noise.size_std, u_rationals[i], noise.p)
            noise_venue, noise_side, noise_size = nd.venue, nd.side, nd.size
            quote = quote_for_noise(pool, nd)
            if quote is not None:
                pool = apply_swap(pool, quote)

        fee_dt = (pool.fees_collected_1 - fees_1_before) \
            + s * (pool.fees_collected_2 - fees_2_before)
        fees_total += fee_dt
        bound_total += bound_dt

        if record_steps:
            records.append(StepRecord(
                t=(i + 1) * dt,
                s=s,
                pool_price=spot_price(pool),
                x1=pool.x1,
                x2=pool.x2,
                fee_income=fee_dt,
                bound_income=bound_dt,
                arb_profit=decision.expected_profit,
                noise_venue=noise_venue,
                noise_side=noise_side,
                noise_size=noise_size,
                pool_price_after_arb=price_after_arb,
                pool_value_after_arb=value_after_arb,
            ))

    return PathResult(
        fees_total=fees_total,
        bound_total=bound_total,
        diff=bound_total - fees_total,
        n_arb_trades=n_arb,
        final_pool=pool,
        steps=records,
    )


def summarize(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (ddof=1; zero for a single value)."""
    n = len(values)
    if n == 0:
        raise ValueError("cannot summarize an empty sequence")
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def run_sweep(
    gammas: Sequence[float],
    sigmas: Sequence[float],
    lambdas: Sequence[float],
    base: SimConfig,
) -> list[AggregateCell]:
    """Monte Carlo over every (gamma, sigma, lambda) cell of the grid.

    Cells are returned sorted by (lambda, sigma, gamma).  Path i of every cell
    consumes identical underlying draws (common random numbers), which cancels
    a large share of the Monte Carlo noise in cross-cell comparisons.
    """
    if not gammas or not sigmas or not lambdas:
        raise ConfigError("invalid config value for grid: gamma, sigma and lambda lists must be non-empty")
    cells: list[AggregateCell] = []
    for lam in sorted(lambdas):
        for sigma in sorted(sigmas):
            for gamma in sorted(gammas):
                config = replace(base, gamma=gamma, sigma=sigma, lam=lam)
                config.validate()
                diffs = []
                trade_counts = []
                for i in range(config.n_paths):
                    result = run_path(config, i)
                    diffs.append(result.diff)
                    trade_counts.append(result.n_arb_trades)
                mean, std = summarize(diffs)
                cells.append(AggregateCell(
                    gamma=gamma,
                    sigma=sigma,
                    lam=lam,
                    mean_diff=mean,
                    std_diff=std,
                    n_paths=config.n_paths,
                    mean_arb_trades=math.fsum(trade_counts) / config.n_paths,
                ))
    return cells


@dataclass(frozen=True, slots=True)
class HedgeReport:
    """Discrete-hedging convergence summary at several step counts."""

    step_counts: tuple[int, ...]
    median_abs_terminal: tuple[float, ...]   # median |Z_T| / value0 per step count
    frac_negative_terminal: tuple[float, ...]
    fee_stream: str                          # "bound" | "none"
    n_paths: int
    value0: float


def verify_hedge(
    config: SimConfig,
    step_counts: Sequence[int],
    fee_stream: str = "bound",
) -> HedgeReport:
    """Replicate the hedged-LP wealth process along GBM paths, no pool needed.

    Starts from zero wealth, shorts the hedge ratio each step, and streams fee
    income at the bound rate ("bound") or not at all ("none").  With the bound
    stream the terminal wealth collapses to zero as the step count grows; with
    no stream it is dominated by the unpaid convexity cost and ends negative.
    """
    config.validate()
    if config.gamma != 1.0:
        raise ConfigError(f"invalid config value for gamma: hedge verification requires gamma = 1 (got {config.gamma})")
    if config.r != 0.0:
        raise ConfigError(f"invalid config value for r: hedge verification requires r = 0 (got {config.r})")
    if fee_stream not in ("bound", "none"):
        raise ConfigError(f"invalid config value for fee_stream: must be 'bound' or 'none' (got {fee_stream!r})")
    if not step_counts:
        raise ConfigError("invalid config value for step_counts: must be non-empty")

    value0 = config.x1_0 + config.s0 * config.x2_0
    ref = ValuationRef(value0=value0, s0=config.s0, theta=config.theta)
    medians = []
    fractions = []
    for n in step_counts:
        if n < 1:
            raise ConfigError(f"invalid config value for step_counts: entries must be >= 1 (got {n})")
        dt = config.horizon / n
        terminals = []
        for i in range(config.n_paths):
            rng = np.random.default_rng([config.master_seed, n, i])
            z_draws = rng.standard_normal(n).tolist()
            s_prev = config.s0
            z = 0.0
            for j in range(n):
                s_next = gbm_step(s_prev, config.sigma, dt, z_draws[j])
                if fee_stream == "bound":
                    value_prev = pool_value_closed_form(ref, s_prev)
                    fee = fee_bound_rate(value_prev, config.theta, config.sigma, 0.0) * dt
                else:
                    fee = 0.0
                z = hedged_wealth_step(z, s_prev, s_next, ref, fee, 0.0, dt)
                s_prev = s_next
            terminals.append(z)
        ordered = sorted(abs(z) / value0 for z in terminals)
        m = len(ordered)
        median = ordered[m // 2] if m % 2 else 0.5 * (ordered[m // 2 - 1] + ordered[m // 2])
        medians.append(median)
        fractions.append(sum(1 for z in terminals if z < 0.0) / m)

    return HedgeReport(
        step_counts=tuple(step_counts),
        median_abs_terminal=tuple(medians),
        frac_negative_terminal=tuple(fractions),
        fee_stream=fee_stream,
        n_paths=config.n_paths,
        value0=value0,
    )
