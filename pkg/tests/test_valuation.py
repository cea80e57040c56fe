"""Valuation, the fee-income bound, and the hedged wealth recursion."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfmlab.pool import PoolState
from cfmlab.valuation import (
    MarketParams,
    ValuationRef,
    delta_hedge_ratio,
    fee_bound_rate,
    fee_income_bound,
    hedged_wealth_step,
    pool_value_closed_form,
    pool_value_mark_to_market,
)

REF = ValuationRef(value0=200.0, s0=10.0, theta=0.5)


# ---------------------------------------------------------------------------
# closed-form value
# ---------------------------------------------------------------------------

def test_closed_form_up_move():
    assert pool_value_closed_form(REF, 12.1) == pytest.approx(220.0, rel=1e-12)


def test_closed_form_identity_at_anchor():
    assert pool_value_closed_form(REF, 10.0) == REF.value0


def test_closed_form_quadruple_price():
    assert pool_value_closed_form(REF, 40.0) == pytest.approx(400.0, rel=1e-12)


def test_closed_form_rejects_nonpositive_price():
    with pytest.raises(ValueError):
        pool_value_closed_form(REF, 0.0)
    with pytest.raises(ValueError):
        pool_value_closed_form(REF, -3.0)


# ---------------------------------------------------------------------------
# mark-to-market value
# ---------------------------------------------------------------------------

def test_mark_to_market_initial_state():
    pool = PoolState(100.0, 10.0)
    assert pool_value_mark_to_market(pool, 10.0) == 200.0


def test_mark_to_market_rejects_bad_price():
    with pytest.raises(ValueError):
        pool_value_mark_to_market(PoolState(100.0, 10.0), 0.0)


def test_mark_to_market_matches_closed_form_after_alignment():
    # reserves produced by a fee-free arbitrage to s = 12.1
    pool = PoolState(110.0, 1000.0 / 110.0)
    marked = pool_value_mark_to_market(pool, 12.1)
    assert marked == pytest.approx(pool_value_closed_form(REF, 12.1), rel=1e-12)


def test_nonpositive_reserve_pool_cannot_exist():
    with pytest.raises(ValueError):
        PoolState(0.0, 10.0)


# ---------------------------------------------------------------------------
# fee-income bound
# ---------------------------------------------------------------------------

def test_bound_rate_example():
    assert fee_bound_rate(200.0, 0.5, 0.4) == pytest.approx(4.0, rel=1e-12)


def test_bound_rate_zero_volatility():
    assert fee_bound_rate(200.0, 0.5, 0.0) == 0.0


def test_bound_rate_with_interest():
    assert fee_bound_rate(200.0, 0.5, 0.4, r=0.02) == pytest.approx(2.0, rel=1e-12)


def test_bound_on_closed_form_value():
    params = MarketParams(s0=10.0, sigma=0.4)
    assert fee_income_bound(REF, 10.0, params) == pytest.approx(4.0, rel=1e-12)


@settings(max_examples=200)
@given(
    s=st.floats(0.1, 100.0),
    theta=st.floats(0.05, 0.95),
    sigma=st.floats(0.0, 2.0),
    value0=st.floats(1.0, 1e6),
)
def test_bound_nonnegative_without_interest(s, theta, sigma, value0):
    ref = ValuationRef(value0=value0, s0=10.0, theta=theta)
    assert fee_income_bound(ref, s, MarketParams(s0=10.0, sigma=sigma)) >= 0.0


@settings(max_examples=100)
@given(s=st.floats(0.1, 100.0), sigma=st.floats(0.01, 2.0))
def test_bound_linear_in_value(s, sigma):
    params = MarketParams(s0=10.0, sigma=sigma)
    doubled = ValuationRef(value0=400.0, s0=10.0, theta=0.5)
    assert fee_income_bound(doubled, s, params) == pytest.approx(
        2.0 * fee_income_bound(REF, s, params), rel=1e-12)


def test_bound_maximal_at_balanced_weight():
    params = MarketParams(s0=10.0, sigma=0.4)
    # compare at fixed pool value: theta enters only through theta*(1-theta)
    at_half = fee_bound_rate(200.0, 0.5, params.sigma)
    for theta in (0.1, 0.3, 0.49, 0.51, 0.7, 0.9):
        assert fee_bound_rate(200.0, theta, params.sigma) < at_half


# ---------------------------------------------------------------------------
# delta hedge
# ---------------------------------------------------------------------------

def test_hedge_ratio_after_up_move():
    assert delta_hedge_ratio(REF, 12.1) == pytest.approx(-110.0 / 12.1, rel=1e-12)


def test_hedge_ratio_at_anchor_equals_minus_holdings():
    # -theta*value0/s0 = -10, exactly the pool's initial risky holdings
    assert delta_hedge_ratio(REF, 10.0) == pytest.approx(-10.0, rel=1e-12)


@settings(max_examples=200)
@given(s=st.floats(0.01, 1000.0), theta=st.floats(0.05, 0.95))
def test_hedge_ratio_always_negative(s, theta):
    ref = ValuationRef(value0=123.0, s0=7.0, theta=theta)
    assert delta_hedge_ratio(ref, s) < 0.0


# ---------------------------------------------------------------------------
# hedged wealth step
# ---------------------------------------------------------------------------

def test_static_price_zero_fee_step_is_flat():
    z = hedged_wealth_step(0.0, 10.0, 10.0, REF, fee_income=0.0, r=0.0, dt=0.001)
    assert z == 0.0


def test_static_price_with_zero_vol_bound_is_flat():
    fee = fee_bound_rate(200.0, 0.5, 0.0) * 0.001
    z = hedged_wealth_step(0.0, 10.0, 10.0, REF, fee_income=fee, r=0.0, dt=0.001)
    assert z == 0.0


def test_single_large_move_costs_convexity():
    z = hedged_wealth_step(0.0, 10.0, 12.1, REF, fee_income=0.0, r=0.0, dt=1.0)
    assert z == pytest.approx(-1.0, rel=1e-12)


def test_interest_accrues_on_uninvested_wealth():
    # flat price, no fees: dz = (z - delta*s) * r * dt with delta = -10
    z = hedged_wealth_step(5.0, 10.0, 10.0, REF, fee_income=0.0, r=0.01, dt=0.5)
    assert z == pytest.approx(5.0 + (5.0 + 100.0) * 0.01 * 0.5, rel=1e-12)


def test_wealth_step_validates_inputs():
    with pytest.raises(ValueError):
        hedged_wealth_step(0.0, -1.0, 10.0, REF, 0.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        hedged_wealth_step(0.0, 10.0, 10.0, REF, 0.0, 0.0, 0.0)


def test_market_params_validation():
    with pytest.raises(ValueError):
        MarketParams(s0=0.0, sigma=0.4)
    with pytest.raises(ValueError):
        MarketParams(s0=10.0, sigma=-0.1)
    with pytest.raises(ValueError):
        MarketParams(s0=10.0, sigma=0.4, r=-0.01)


def test_valuation_ref_validation():
    with pytest.raises(ValueError):
        ValuationRef(value0=0.0, s0=10.0, theta=0.5)
    with pytest.raises(ValueError):
        ValuationRef(value0=200.0, s0=10.0, theta=1.0)
