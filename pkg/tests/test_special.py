"""Tests for gamma helpers and the Mittag-Leffler evaluator."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from subdelay.special import (
    MLConvergenceError,
    MLParams,
    _asymptotic,
    _integral_negative,
    _series,
    log_gamma,
    mittag_leffler,
    mittag_leffler_array,
    reciprocal_gamma,
)

# Arbitrary-precision references (300 significant digits upstream),
# truncated to double precision.
LOG_GAMMA_REFS = {
    0.001: 6.907178885383853682512,
    0.01: 4.599479878042021722514,
    0.5: 0.5723649429247000870717,
    1.0: 0.0,
    1.5: -0.1207822376352452223455,
    2.0: 0.0,
    4.7: 2.736405146315566682222,
    10.0: 12.80182748008146961121,
    123.456: 469.6055471299294687301,
    10000.0: 82099.71749644237727265,
}

# (mu, nu, z) -> E_{mu,nu}(z), same provenance.
ML_REFS = {
    (0.7, 1.0, -3.0): 0.137897109665027071834,
    (0.4, 1.0, -6.6): 0.09628373814812295194069,
    (0.9, 0.9, -12.0): 0.0009150841599472933078278,
    (0.5, 1.0, 2.0): 108.9409043899779724124,
    (0.7, 1.0, -10.0): 0.03617326554230915333172,
    (0.4, 1.0, -25.0): 0.02650137566886667426523,
    (0.6, 0.6, -4.0): 0.01826470785510776951215,
    (0.9, 1.0, -17.0): 0.006883897002567917691994,
    (0.75, 1.0, -10.0): 0.03064325097605963777258,
    (0.8, 1.0, -10.0): 0.02490281976197653737596,
    (0.9, 1.0, -5.0): 0.03443132480409842390505,
    (0.65, 1.0, -5.0): 0.08661280142592327811971,
    (0.5, 2.2, -8.0): 0.1219960634866420527226,
    (0.3, 1.0, -2.0): 0.2902322261678753532588,
    (0.85, 0.85, -30.0): 0.0001680673616840130036036,
}

E_ERFC_1 = 0.4275835761558070044108  # e * erfc(1)


def test_log_gamma_matches_references():
    for x, ref in LOG_GAMMA_REFS.items():
        got = log_gamma(x)
        assert got == pytest.approx(ref, rel=1e-13, abs=1e-13)


def test_log_gamma_rejects_bad_input():
    for x in (0.0, -1.0, -0.5, math.nan, math.inf):
        with pytest.raises(ValueError):
            log_gamma(x)


@given(x=st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=200, deadline=None)
def test_log_gamma_recurrence(x):
    lhs = log_gamma(x + 1.0)
    rhs = log_gamma(x) + math.log(x)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(lhs - rhs) <= 1e-12 * scale


def test_reciprocal_gamma_poles_and_reflection():
    for x in (0.0, -1.0, -2.0, -17.0):
        assert reciprocal_gamma(x) == 0.0
    assert reciprocal_gamma(0.5) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-14)
    assert reciprocal_gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    # Gamma(-0.5) = -2 sqrt(pi)
    assert reciprocal_gamma(-0.5) == pytest.approx(-1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-13)


def test_reciprocal_gamma_large_positive_underflows_cleanly():
    assert reciprocal_gamma(500.0) == 0.0


def test_ml_point_references():
    for (mu, nu, z), ref in ML_REFS.items():
        params = MLParams(mu=mu, nu=nu)
        got = mittag_leffler(params, z)
        assert got == pytest.approx(ref, rel=1e-12), (mu, nu, z)


def test_ml_half_order_matches_erfc():
    params = MLParams(mu=0.5)
    assert mittag_leffler(params, -1.0) == pytest.approx(E_ERFC_1, rel=1e-13)


def test_ml_exponential_special_case():
    params = MLParams(mu=1.0)
    for z in (-5.0, -1.0, 0.0, 0.5, 3.0):
        assert mittag_leffler(params, z) == pytest.approx(math.exp(z), rel=1e-13)


def test_ml_at_zero_is_reciprocal_gamma_of_nu():
    assert mittag_leffler(MLParams(mu=0.6), 0.0) == 1.0
    assert mittag_leffler(MLParams(mu=0.6, nu=0.6), 0.0) == pytest.approx(
        reciprocal_gamma(0.6), rel=1e-15
    )


@pytest.mark.parametrize("mu", [0.3, 0.5, 0.7, 0.85])
def test_ml_positive_and_decreasing_on_negative_axis(mu):
    # the grid crosses the series/asymptotic switch at |z| = 10
    params = MLParams(mu=mu)
    zs = -np.linspace(0.0, 14.0, 57)
    vals = np.array([mittag_leffler(params, z) for z in zs])
    assert np.all(vals > 0.0)
    assert np.all(np.diff(vals) < 0.0)


def test_ml_bounded_by_one_on_negative_axis():
    for mu in (0.4, 0.7, 0.9):
        params = MLParams(mu=mu)
        for t in np.linspace(0.0, 4.0, 17):
            v = mittag_leffler(params, -2.0 * t**mu)
            assert 0.0 < v <= 1.0


@pytest.mark.parametrize("mu", [0.4, 0.7, 0.9])
def test_ml_mu_mu_kernel_nonnegative(mu):
    params = MLParams(mu=mu, nu=mu)
    for eta in np.linspace(0.0, 50.0, 26):
        assert mittag_leffler(params, -eta) >= -1e-15


@pytest.mark.parametrize("mu", [0.4, 0.7, 0.9])
@pytest.mark.parametrize("rate", [1.0, 5.0, 20.0])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_ml_derivative_identity(mu, rate, t):
    # d/dt E_mu(-rate t^mu) = -rate t^(mu-1) E_{mu,mu}(-rate t^mu)
    p1 = MLParams(mu=mu)
    p2 = MLParams(mu=mu, nu=mu)
    h = 1e-6 * t
    fd = (
        mittag_leffler(p1, -rate * (t + h) ** mu)
        - mittag_leffler(p1, -rate * (t - h) ** mu)
    ) / (2.0 * h)
    exact = -rate * t ** (mu - 1.0) * mittag_leffler(p2, -rate * t**mu)
    assert fd == pytest.approx(exact, rel=1e-4)


@pytest.mark.parametrize("mu", [0.4, 0.55, 0.65, 0.7, 0.75])
def test_ml_asymptotic_agrees_with_integral_near_radius(mu):
    # near |z| = 10 the truncated large-argument expansion is reliable for
    # these mu; the cut integral is an independent route to the same value
    params = MLParams(mu=mu)
    for z in (-9.9, -10.0, -10.1):
        asym_val, est = _asymptotic(params, z)
        assert est <= 1e-8
        ref = _integral_negative(params, z)
        scale = max(abs(ref), abs(asym_val))
        assert abs(asym_val - ref) <= 1e-8 * scale


@pytest.mark.parametrize("mu", [0.65, 0.7, 0.75, 0.8, 0.9])
def test_ml_series_agrees_with_integral_in_mild_regime(mu):
    # while cancellation is mild the compensated series is trustworthy; at
    # z = -2.5 its peak-to-result ratio stays far below the reroute limit
    params = MLParams(mu=mu)
    for z in (-1.0, -2.5):
        series_val, ratio, status, _ = _series(params, z)
        assert status == "ok"
        ref = _integral_negative(params, z)
        scale = max(abs(ref), abs(series_val))
        assert abs(series_val - ref) <= 1e-10 * scale


def test_ml_continuous_across_branch_radius():
    for mu in (0.45, 0.7, 0.9):
        params = MLParams(mu=mu)
        lo = mittag_leffler(params, -10.0 - 1e-9)
        hi = mittag_leffler(params, -10.0 + 1e-9)
        assert abs(lo - hi) <= 1e-9 * abs(lo)


def test_ml_budget_error_carries_term_count():
    params = MLParams(mu=0.7, max_series_terms=30)
    with pytest.raises(MLConvergenceError) as exc_info:
        mittag_leffler(params, 9.0)
    assert exc_info.value.terms_used == 30


def test_ml_overflow_for_huge_positive_argument():
    params = MLParams(mu=0.4)
    with pytest.raises(OverflowError):
        mittag_leffler(params, 1e6)


def test_ml_params_validation():
    with pytest.raises(ValueError):
        MLParams(mu=0.0)
    with pytest.raises(ValueError):
        MLParams(mu=-0.5)
    with pytest.raises(ValueError):
        MLParams(mu=0.7, series_tol=1e-7)
    with pytest.raises(ValueError):
        MLParams(mu=0.7, series_tol=0.0)
    with pytest.raises(ValueError):
        MLParams(mu=0.7, series_radius=-1.0)
    with pytest.raises(ValueError):
        MLParams(mu=0.7, nu=math.nan)


def test_ml_rejects_nonfinite_argument():
    params = MLParams(mu=0.7)
    with pytest.raises(ValueError):
        mittag_leffler(params, math.nan)
    with pytest.raises(ValueError):
        mittag_leffler_array(params, np.array([0.0, math.inf]))


@pytest.mark.parametrize("mu", [0.45, 0.7, 0.9])
def test_ml_array_matches_scalar(mu):
    params = MLParams(mu=mu)
    zs = np.array([-30.0, -10.05, -9.0, -5.0, -3.0, -0.5, 0.0, 0.5, 3.0, 8.0])
    vals = mittag_leffler_array(params, zs)
    for z, v in zip(zs, vals):
        assert v == pytest.approx(mittag_leffler(params, z), rel=1e-12, abs=1e-300)


def test_ml_array_preserves_shape():
    params = MLParams(mu=0.6)
    zs = np.linspace(-12.0, 2.0, 12).reshape(3, 4)
    vals = mittag_leffler_array(params, zs)
    assert vals.shape == (3, 4)


@given(
    mu=st.floats(min_value=0.1, max_value=0.95),
    z=st.floats(min_value=-8.0, max_value=8.0),
)
@settings(max_examples=60, deadline=None)
def test_ml_finite_and_monotone_property(mu, z):
    # E grows like exp(z**(1/mu)) for z > 0; skip draws past float range
    assume(z <= 1.0 or math.log(z) / mu <= 6.3)
    params = MLParams(mu=mu)
    val = mittag_leffler(params, z)
    assert math.isfinite(val)
    if z <= 0.0:
        assert val > 0.0
        assert mittag_leffler(params, z - 0.5) < val
