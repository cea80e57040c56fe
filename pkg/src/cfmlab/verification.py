"""Self-contained property suites backing the `verify` CLI command.

Each check exercises one structural guarantee of the library against an
independent route: swap execution against the invariant level, the arbitrage
closed form against a brute-force grid maximizer, reserve-marked valuation
against the closed-form value, discrete hedging against its continuous-time
limit, and the price engine against the moments of geometric Brownian motion.

Checks return a CheckResult rather than raising, so callers can print a
full report before deciding the exit code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .agents import solve_arbitrage
from .engine import SimConfig, gbm_step, run_path, verify_hedge
from .pool import (
    BUY_ASSET_1,
    BUY_ASSET_2,
    PoolState,
    apply_swap,
    invariant,
    quote_swap,
)
from .valuation import ValuationRef, pool_value_closed_form

__all__ = [
    "CheckResult",
    "grid_search_arbitrage",
    "random_arb_instance",
    "check_invariant_preservation",
    "check_arbitrage_oracle",
    "check_closed_form_identity",
    "check_hedge_convergence",
    "check_gbm_calibration",
    "run_all_checks",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str
    limit: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured {self.measured} (limit {self.limit})"


# ---------------------------------------------------------------------------
# Invariant preservation under random swaps
# ---------------------------------------------------------------------------

def check_invariant_preservation(n_trials: int = 400, seed: int = 2024) -> CheckResult:
    """Apply random quotes in both directions and modes; the level must hold."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_trials):
        x1 = float(10.0 ** rng.uniform(0.0, 4.0))
        spot = float(10.0 ** rng.uniform(-1.5, 1.5))
        theta = 0.5 if rng.random() < 0.5 else float(rng.uniform(0.15, 0.85))
        x2 = (1.0 - theta) * x1 / (theta * spot)
        gamma = float(rng.uniform(0.9, 1.0))
        pool = PoolState(x1=x1, x2=x2, theta=theta, gamma=gamma)

        side = BUY_ASSET_2 if rng.random() < 0.5 else BUY_ASSET_1
        mode = "exact_in" if rng.random() < 0.5 else "exact_out"
        if mode == "exact_in":
            reserve = x1 if side == BUY_ASSET_2 else x2
        else:
            reserve = x2 if side == BUY_ASSET_2 else x1
        amount = float(rng.uniform(0.0, 0.5)) * reserve

        before = invariant(pool)
        new_pool = apply_swap(pool, quote_swap(pool, side, amount, mode))
        drift = abs(invariant(new_pool) - before) / before
        worst = max(worst, drift)
    passed = worst <= 1e-12
    return CheckResult(
        name="invariant preservation under random swaps",
        passed=passed,
        measured=f"max relative drift {worst:.3e} over {n_trials} swaps",
        limit="1e-12",
    )


# ---------------------------------------------------------------------------
# Arbitrage closed form vs brute-force grid search
# ---------------------------------------------------------------------------

def random_arb_instance(rng: np.random.Generator) -> tuple[PoolState, float]:
    """Random pool and reference price with a broad mix of gap sizes."""
    x1 = float(10.0 ** rng.uniform(0.0, 4.0))
    spot = float(10.0 ** rng.uniform(-1.3, 1.3))
    theta = 0.5 if rng.random() < 0.5 else float(rng.uniform(0.15, 0.85))
    x2 = (1.0 - theta) * x1 / (theta * spot)
    roll = rng.random()
    if roll < 0.25:
        gamma = 1.0
    elif roll < 0.75:
        gamma = float(rng.uniform(0.96, 1.0))
    else:
        gamma = float(rng.uniform(0.5, 0.96))
    pool = PoolState(x1=x1, x2=x2, theta=theta, gamma=gamma)

    if rng.random() < 0.1:
        s = spot  # exact tie, sits inside any band
    else:
        log_gap = math.exp(rng.uniform(math.log(2e-3), math.log(0.7)))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        s = spot * math.exp(sign * log_gap)
    return pool, s


def _grid_best(delta_max: float, points: int, profit_fn) -> tuple[float, float]:
    """Best (profit, delta) over a uniform grid on (0, delta_max]."""
    deltas = np.linspace(0.0, delta_max, points + 1)[1:]
    profits = profit_fn(deltas)
    i = int(np.argmax(profits))
    return float(profits[i]), float(deltas[i])


def _refine(delta_best: float, spacing: float, points: int, profit_fn) -> float:
    lo = max(delta_best - spacing, 0.0)
    deltas = np.linspace(lo, delta_best + spacing, points)
    deltas = deltas[deltas > 0.0]
    return float(np.max(profit_fn(deltas)))


def grid_search_arbitrage(
    pool: PoolState,
    s: float,
    coarse: int = 200_000,
    fine: int = 600_000,
) -> float:
    """Brute-force maximum arbitrage profit over both trade directions.

    Independent of the closed form: scans a uniform grid of deposit sizes in
    each direction, then re-scans a finer grid around the coarse optimum.
    The deposit ranges cover every trade that could possibly be profitable.
    Returns 0.0 when no grid point makes money.
    """
    theta, c = pool.theta, 2.0 - pool.gamma
    log_level = theta * math.log(pool.x1) + (1.0 - theta) * math.log(pool.x2)

    def profit_buy2(deltas: np.ndarray) -> np.ndarray:
        new_x2 = np.exp((log_level - theta * np.log(pool.x1 + deltas)) / (1.0 - theta))
        return s * (pool.x2 - new_x2) - c * deltas

    def profit_buy1(deltas: np.ndarray) -> np.ndarray:
        new_x1 = np.exp((log_level - (1.0 - theta) * np.log(pool.x2 + deltas)) / theta)
        return (pool.x1 - new_x1) - c * s * deltas

    # Beyond these deposits the profit is negative regardless of the output.
    max_buy2 = s * pool.x2 / c
    max_buy1 = pool.x1 / (c * s)

    best2, at2 = _grid_best(max_buy2, coarse, profit_buy2)
    best1, at1 = _grid_best(max_buy1, coarse, profit_buy1)
    if best2 >= best1:
        best = _refine(at2, 2.0 * max_buy2 / coarse, fine, profit_buy2)
        best = max(best, best1)
    else:
        best = _refine(at1, 2.0 * max_buy1 / coarse, fine, profit_buy1)
        best = max(best, best2)
    # Grid profits below the float-noise scale of the expressions above are
    # indistinguishable from zero; treat them as no-trade.
    noise_floor = 1e-12 * (pool.x1 + s * pool.x2)
    return best if best > noise_floor else 0.0


def check_arbitrage_oracle(n_instances: int = 1000, seed: int = 77) -> CheckResult:
    """Closed-form solver vs the grid maximizer on random instances."""
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    disagreements = 0
    for _ in range(n_instances):
        pool, s = random_arb_instance(rng)
        solver = solve_arbitrage(pool, s)
        oracle = grid_search_arbitrage(pool, s)
        solver_trades = solver.quote is not None
        oracle_trades = oracle > 0.0
        if solver_trades != oracle_trades:
            disagreements += 1
            continue
        if solver_trades:
            scale = max(solver.expected_profit, oracle)
            worst_rel = max(worst_rel, abs(solver.expected_profit - oracle) / scale)
    passed = disagreements == 0 and worst_rel <= 1e-6
    return CheckResult(
        name="arbitrage closed form vs grid search",
        passed=passed,
        measured=(
            f"max relative profit gap {worst_rel:.3e}, "
            f"{disagreements} decision disagreements over {n_instances} instances"
        ),
        limit="1e-6 relative, 0 disagreements",
    )


# ---------------------------------------------------------------------------
# Reserve-marked value vs closed-form value along fee-free paths
# ---------------------------------------------------------------------------

def check_closed_form_identity(n_paths: int = 3, seed: int = 11) -> CheckResult:
    """With gamma = 1 the marked pool value must track value0*(s/s0)**theta."""
    config = SimConfig(gamma=1.0, sigma=0.4, lam=50.0, master_seed=seed)
    ref = ValuationRef(value0=config.x1_0 + config.s0 * config.x2_0,
                       s0=config.s0, theta=config.theta)
    worst = 0.0
    for i in range(n_paths):
        result = run_path(config, i, record_steps=True)
        for record in result.steps:
            expected = pool_value_closed_form(ref, record.s)
            worst = max(worst, abs(record.pool_value_after_arb - expected) / expected)
    passed = worst <= 1e-8
    return CheckResult(
        name="closed-form value identity on fee-free paths",
        passed=passed,
        measured=f"max relative gap {worst:.3e} over {n_paths} paths",
        limit="1e-8",
    )


# ---------------------------------------------------------------------------
# Hedge replication convergence
# ---------------------------------------------------------------------------

def check_hedge_convergence(
    step_counts: tuple[int, ...] = (100, 1000, 10000),
    n_paths: int = 100,
    seed: int = 5,
) -> CheckResult:
    """Terminal hedged wealth shrinks with the step count; no fees => losses."""
    config = SimConfig(gamma=1.0, sigma=0.4, lam=50.0, n_paths=n_paths, master_seed=seed)
    report = verify_hedge(config, step_counts, fee_stream="bound")
    medians = report.median_abs_terminal
    decreasing = all(b < a for a, b in zip(medians, medians[1:]))
    small = medians[-1] < 0.01
    zero = verify_hedge(config, step_counts[-1:], fee_stream="none")
    mostly_negative = zero.frac_negative_terminal[0] >= 0.95
    passed = decreasing and small and mostly_negative
    return CheckResult(
        name="hedge replication convergence",
        passed=passed,
        measured=(
            "median |Z_T|/value0 = "
            + ", ".join(f"{m:.2e}@{n}" for n, m in zip(step_counts, medians))
            + f"; zero-fee negative fraction {zero.frac_negative_terminal[0]:.2f}"
        ),
        limit="decreasing, < 1e-2 at max steps, >= 0.95 negative",
    )


# ---------------------------------------------------------------------------
# GBM moment calibration
# ---------------------------------------------------------------------------

def check_gbm_calibration(
    n_paths: int = 10_000,
    n_steps: int = 100,
    sigma: float = 0.4,
    horizon: float = 1.0,
    s0: float = 10.0,
    seed: int = 303,
) -> CheckResult:
    """Terminal mean within 3 standard errors; log variance within 5%."""
    dt = horizon / n_steps
    rng = np.random.default_rng(seed)
    terminals = np.empty(n_paths)
    for i in range(n_paths):
        s = s0
        for z in rng.standard_normal(n_steps).tolist():
            s = gbm_step(s, sigma, dt, z)
        terminals[i] = s
    mean = float(np.mean(terminals))
    se = float(np.std(terminals, ddof=1)) / math.sqrt(n_paths)
    mean_ok = abs(mean - s0) <= 3.0 * se
    log_var = float(np.var(np.log(terminals / s0), ddof=1))
    var_target = sigma * sigma * horizon
    var_rel = abs(log_var - var_target) / var_target
    var_ok = var_rel <= 0.05
    return CheckResult(
        name="GBM martingale and variance calibration",
        passed=mean_ok and var_ok,
        measured=(
            f"|mean - s0| = {abs(mean - s0):.4f} vs 3*SE = {3 * se:.4f}; "
            f"log-variance off by {var_rel:.2%}"
        ),
        limit="3 standard errors; 5%",
    )


def run_all_checks() -> list[CheckResult]:
    """Every suite, in a stable order."""
    return [
        check_invariant_preservation(),
        check_arbitrage_oracle(),
        check_closed_form_identity(),
        check_hedge_convergence(),
        check_gbm_calibration(),
    ]
