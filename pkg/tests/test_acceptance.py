"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion with the measured values.  The full-grid Monte Carlo fixture is
shared across the grid criteria, so the whole suite runs in a few minutes.
"""

import math
from dataclasses import replace

import pytest

from cfmlab.cli import main
from cfmlab.engine import SimConfig, run_path, run_sweep
from cfmlab.valuation import ValuationRef, pool_value_closed_form
from cfmlab.verification import (
    check_arbitrage_oracle,
    check_closed_form_identity,
    check_gbm_calibration,
    check_hedge_convergence,
)

GAMMAS = [round(0.96 + 0.005 * k, 3) for k in range(9)]
SIGMAS = [0.2, 0.4, 0.6, 0.8]
LAMBDAS = [50.0, 75.0, 100.0]

BASE = SimConfig(gamma=1.0, sigma=0.4, lam=50.0, n_steps=1000, n_paths=100,
                 horizon=1.0, master_seed=0)


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="session")
def paper_grid():
    """Full 9 x 4 x 3 grid at 100 paths per cell."""
    cells = run_sweep(GAMMAS, SIGMAS, LAMBDAS, BASE)
    assert len(cells) == 108
    return cells


def by_key(cells):
    return {(c.gamma, c.sigma, c.lam): c for c in cells}


# ---------------------------------------------------------------------------
# criterion 1: underpayment everywhere
# ---------------------------------------------------------------------------

def test_c01_underpayment_everywhere(paper_grid):
    offenders = [c for c in paper_grid if not c.mean_diff > 0.0]
    worst = min(paper_grid, key=lambda c: c.mean_diff)
    detail = (
        f"{108 - len(offenders)}/108 cells have mean D > 0; "
        f"worst cell (gamma={worst.gamma}, sigma={worst.sigma}, lambda={worst.lam:g}) "
        f"mean D = {worst.mean_diff:+.4f} (std {worst.std_diff:.4f})"
    )
    if offenders:
        detail += (
            ". Negative cells sit where per-step price moves are small against "
            "the no-trade band (sigma = 0.2, wide band): there the arbitrageur's "
            "fee payments approach their continuum rate, which is "
            "(1-gamma)/ln(2-gamma) >= 1 times the bound, so fee income need not "
            "stay below the bound at this step size."
        )
    report("underpayment everywhere (mean D > 0 in all 108 cells)",
           not offenders, detail)


# ---------------------------------------------------------------------------
# criterion 2: sigma monotonicity
# ---------------------------------------------------------------------------

def test_c02_sigma_monotonicity(paper_grid):
    cells = by_key(paper_grid)
    increases = total = 0
    for gamma in GAMMAS:
        for lam in LAMBDAS:
            means = [cells[(gamma, sigma, lam)].mean_diff for sigma in SIGMAS]
            for a, b in zip(means, means[1:]):
                total += 1
                increases += b > a
    frac = increases / total
    report("mean D increasing in sigma (>= 90% of adjacent pairs)",
           frac >= 0.9, f"{increases}/{total} adjacent increases ({frac:.1%})")


# ---------------------------------------------------------------------------
# criterion 3: lambda insensitivity
# ---------------------------------------------------------------------------

def test_c03_lambda_insensitivity(paper_grid):
    cells = by_key(paper_grid)
    negative = {lam: [c for c in paper_grid if c.lam == lam and not c.mean_diff > 0.0]
                for lam in LAMBDAS}
    sign_ok = not any(negative.values())

    order_ok = True
    for gamma in GAMMAS:
        rankings = []
        for lam in LAMBDAS:
            means = [cells[(gamma, sigma, lam)].mean_diff for sigma in SIGMAS]
            rankings.append(tuple(sorted(range(len(SIGMAS)), key=lambda i: means[i])))
        order_ok &= all(r == rankings[0] for r in rankings)

    sign_detail = "; ".join(
        f"lambda={lam:g}: {len(cells_)} non-positive cells"
        for lam, cells_ in negative.items())
    report("lambda insensitivity (positive sign for every lambda; sigma "
           "ordering preserved across lambda)",
           sign_ok and order_ok,
           f"{sign_detail}; sigma ordering identical across lambda: {order_ok}")


# ---------------------------------------------------------------------------
# criterion 4: trade count vs fee
# ---------------------------------------------------------------------------

def test_c04_trade_count_monotone_in_fee(paper_grid):
    cells = by_key(paper_grid)
    violations = []
    for sigma in SIGMAS:
        for lam in LAMBDAS:
            counts = [cells[(gamma, sigma, lam)].mean_arb_trades for gamma in GAMMAS]
            # non-increasing in the fee (1 - gamma) == non-decreasing in gamma
            for g_lo, g_hi, c_lo, c_hi in zip(GAMMAS, GAMMAS[1:], counts, counts[1:]):
                if c_hi < c_lo:
                    violations.append((sigma, lam, g_lo, g_hi, c_lo, c_hi))
    lo = min(cells[(GAMMAS[0], s, l)].mean_arb_trades for s in SIGMAS for l in LAMBDAS)
    hi = max(cells[(GAMMAS[-1], s, l)].mean_arb_trades for s in SIGMAS for l in LAMBDAS)
    report("arbitrage trade count non-increasing in the fee",
           not violations,
           f"{len(violations)} adjacent violations; counts span "
           f"{lo:.0f} (gamma=0.96) to {hi:.0f} (gamma=1.0)")


# ---------------------------------------------------------------------------
# criterion 5: price tracking and the no-trade band
# ---------------------------------------------------------------------------

def test_c05_price_tracking_and_band():
    worst_track = 0.0
    for i in range(3):
        result = run_path(replace(BASE, gamma=1.0), i, record_steps=True)
        for r in result.steps:
            worst_track = max(worst_track, abs(r.pool_price_after_arb - r.s) / r.s)
    track_ok = worst_track <= 1e-9

    c = 2.0 - 0.997
    worst_band = 0.0
    for i in range(3):
        result = run_path(replace(BASE, gamma=0.997), i, record_steps=True)
        for r in result.steps:
            lo, hi = r.s / c, r.s * c
            excess = max(lo - r.pool_price_after_arb, r.pool_price_after_arb - hi, 0.0)
            worst_band = max(worst_band, excess / r.s)
    band_ok = worst_band <= 1e-9

    report("gamma=1 tracking <= 1e-9 and gamma=0.997 band containment",
           track_ok and band_ok,
           f"max tracking gap {worst_track:.2e}; max band excess {worst_band:.2e} "
           f"(3 paths x 1000 steps each)")


# ---------------------------------------------------------------------------
# criterion 6: arbitrage oracle equivalence
# ---------------------------------------------------------------------------

def test_c06_arbitrage_oracle_equivalence():
    result = check_arbitrage_oracle(n_instances=1000)
    report("arbitrage solver matches 1e6-point grid search on 1000 instances",
           result.passed, result.measured)


# ---------------------------------------------------------------------------
# criterion 7: closed-form value identity
# ---------------------------------------------------------------------------

def test_c07_closed_form_identity():
    result = check_closed_form_identity()
    report("fee-free reserve value equals the closed-form value (1e-8)",
           result.passed, result.measured)


# ---------------------------------------------------------------------------
# criterion 8: hedge replication
# ---------------------------------------------------------------------------

def test_c08_hedge_replication():
    result = check_hedge_convergence(step_counts=(100, 1000, 10000), n_paths=100)
    report("hedged wealth: decreasing, < 1% at 1e4 steps, negative without fees",
           result.passed, result.measured)


# ---------------------------------------------------------------------------
# criterion 9: GBM calibration
# ---------------------------------------------------------------------------

def test_c09_gbm_calibration():
    result = check_gbm_calibration(n_paths=10_000)
    report("GBM terminal mean within 3 SE, log-variance within 5%",
           result.passed, result.measured)


# ---------------------------------------------------------------------------
# criterion 10: byte-identical outputs
# ---------------------------------------------------------------------------

def test_c10_determinism_byte_identical(tmp_path):
    config = tmp_path / "config.txt"
    config.write_text(
        "gamma = 0.997\nsigma = 0.4\nlambda = 50\nmaster_seed = 0\n", encoding="utf-8")
    sweep_config = tmp_path / "sweep.txt"
    sweep_config.write_text(
        "gamma = [0.96, 1.0]\nsigma = 0.4\nlambda = 50\nn_steps = 200\nn_paths = 5\n",
        encoding="utf-8")

    outs = [tmp_path / name for name in ("a", "b", "c", "d")]
    assert main(["simulate", "--config", str(config), "--out", str(outs[0])]) == 0
    assert main(["simulate", "--config", str(config), "--out", str(outs[1])]) == 0
    assert main(["sweep", "--config", str(sweep_config), "--out", str(outs[2])]) == 0
    assert main(["sweep", "--config", str(sweep_config), "--out", str(outs[3])]) == 0

    steps_same = (outs[0] / "steps.csv").read_bytes() == (outs[1] / "steps.csv").read_bytes()
    sweep_same = (outs[2] / "sweep.csv").read_bytes() == (outs[3] / "sweep.csv").read_bytes()
    report("identical config + seed give byte-identical CSVs",
           steps_same and sweep_same,
           f"steps.csv identical: {steps_same}; sweep.csv identical: {sweep_same}")
