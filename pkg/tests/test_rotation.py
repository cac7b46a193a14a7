"""Retry-chain statistics, flip-probability series, quasi-probability
mitigation.

Independent oracle for the series: conditioned on stopping at step n,
the flip parity is odd with probability (1 - (1-2x)^n)/2, and summing
that against the geometric stopping weights gives 2x/(1+2x) in closed
form.  The implementation never uses either expression.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from patchsim.rotation import (
    MAX_SERIES_STEPS,
    PecPlan,
    RusModel,
    pec_mitigate,
    rus_error_exact,
    rus_error_terms,
    rus_mean_steps,
    sampling_overhead,
    simulate_rus,
    simulate_rus_batch,
    two_outcome_sampler,
)


def test_model_validation():
    m = RusModel()
    assert m.p_z1 == 0.0 and m.p_success_per_step == 0.5
    with pytest.raises(ValueError):
        RusModel(p_z1=0.5)
    with pytest.raises(ValueError):
        RusModel(p_z1=-1e-9)
    with pytest.raises(ValueError):
        RusModel(p_success_per_step=0.0)


def test_mean_steps():
    assert rus_mean_steps() == 2.0
    assert rus_mean_steps(RusModel(p_success_per_step=0.25)) == 4.0


def test_simulate_rus_stepwise():
    rng = np.random.default_rng(37)
    clean = RusModel()
    runs = [simulate_rus(clean, rng) for _ in range(20_000)]
    steps = np.array([s for s, _ in runs])
    assert not any(f for _, f in runs)
    assert steps.min() >= 1
    # geometric with ratio 1/2: mean 2, var 2, P(1 step) = 1/2
    assert abs(steps.mean() - 2.0) < 3 * math.sqrt(2 / 20_000)
    assert abs((steps == 1).mean() - 0.5) < 3 * math.sqrt(0.25 / 20_000)


def test_batch_statistics_match_series():
    model = RusModel(p_z1=1e-3)
    rng = np.random.default_rng(41)
    steps, flips = simulate_rus_batch(model, 1_000_000, rng)
    assert abs(steps.mean() - 2.0) < 0.01
    p = rus_error_exact(1e-3)
    sigma = math.sqrt(p * (1 - p) / 1_000_000)
    assert abs(flips.mean() - p) < 3 * sigma
    with pytest.raises(ValueError):
        simulate_rus_batch(model, 0, rng)


def test_error_terms_small_orders():
    x = 0.07
    assert rus_error_terms(x, 1) == x
    assert rus_error_terms(x, 2) == pytest.approx(2 * x * (1 - x), rel=1e-15)
    assert rus_error_terms(x, 3) == pytest.approx(
        3 * x * (1 - x) ** 2 + x**3, rel=1e-15
    )
    assert rus_error_terms(Fraction(1, 10), 2) == Fraction(9, 50)
    with pytest.raises(ValueError):
        rus_error_terms(x, 0)


@given(
    st.fractions(min_value=0, max_value=Fraction(99, 200), max_denominator=200),
    st.integers(min_value=1, max_value=40),
)
def test_error_terms_match_flip_parity(x, n):
    assert rus_error_terms(x, n) == (1 - (1 - 2 * x) ** n) / 2


def test_error_exact_matches_closed_form():
    for x in (1e-6, 1e-4, 1e-3, 0.01, 0.1, 0.3, 0.45):
        assert rus_error_exact(x) == pytest.approx(2 * x / (1 + 2 * x), rel=1e-14)
    assert rus_error_exact(0.0) == 0.0
    with pytest.raises(ValueError):
        rus_error_exact(0.5)


def test_series_truncation_converged():
    assert rus_error_exact(0.05) == rus_error_exact(0.05, max_steps=256)
    x = Fraction(1, 20)
    tail = sum(
        Fraction(1, 2**n) * rus_error_terms(x, n)
        for n in range(MAX_SERIES_STEPS + 1, 129)
    )
    assert tail / (2 * x / (1 + 2 * x)) < Fraction(1, 10**18)


def test_pec_plan():
    plan = PecPlan(0.1)
    assert plan.gamma == pytest.approx(1.25)
    assert plan.overhead == pytest.approx(1.5625)
    assert PecPlan(0.0).gamma == 1.0
    assert PecPlan(0.3, 0).overhead == 1.0
    for p in (0.5, 0.7, -0.1):
        with pytest.raises(ValueError):
            PecPlan(p)
    with pytest.raises(ValueError):
        PecPlan(0.1, -1)


def _test_channel(ideal=0.8, p_flip=0.1):
    noisy = ideal * (1 - 2 * p_flip)
    return two_outcome_sampler(noisy), two_outcome_sampler(-noisy), noisy


def test_pec_recovers_ideal_value():
    plain, flipped, _ = _test_channel()
    rng = np.random.default_rng(43)
    est, sigma = pec_mitigate(plain, flipped, 0.1, 200_000, rng)
    assert sigma > 0
    assert abs(est - 0.8) < 3 * sigma


def test_pec_unbiased_over_repetitions():
    plain, flipped, _ = _test_channel()
    rng = np.random.default_rng(47)
    pairs = [pec_mitigate(plain, flipped, 0.1, 20_000, rng) for _ in range(100)]
    ests = np.array([e for e, _ in pairs])
    combined = math.sqrt(sum(s**2 for _, s in pairs)) / 100
    assert abs(ests.mean() - 0.8) < 4 * combined


def test_pec_variance_amplification():
    plain, flipped, noisy = _test_channel()
    rng = np.random.default_rng(53)
    n = 100_000
    _, sigma = pec_mitigate(plain, flipped, 0.1, n, rng)
    var_mitigated = sigma**2 * n
    var_plain = plain(np.random.default_rng(59), n).var(ddof=1)
    gamma2 = PecPlan(0.1).overhead
    assert abs(var_mitigated / var_plain / gamma2 - 1) < 0.2


def test_pec_zero_flip_reduces_to_plain_mean():
    plain, flipped, _ = _test_channel()
    est, _ = pec_mitigate(plain, flipped, 0.0, 5000, np.random.default_rng(61))
    rng = np.random.default_rng(61)
    rng.random(5000)  # the branch-choice draws come first
    assert est == plain(rng, 5000).mean()


def test_pec_validation():
    plain, flipped, _ = _test_channel()
    rng = np.random.default_rng(1)
    with pytest.raises(ValueError):
        pec_mitigate(plain, flipped, 0.6, 100, rng)
    with pytest.raises(ValueError):
        pec_mitigate(plain, flipped, 0.1, 1, rng)
    with pytest.raises(ValueError):
        two_outcome_sampler(1.5)


def test_sampling_overhead_reference_point():
    exact, approx = sampling_overhead(2e-4 / 15, 37_500)
    assert exact == pytest.approx(54.598150085180286, rel=1e-12)
    assert approx == pytest.approx(math.exp(4.0), rel=1e-15)
    assert exact == pytest.approx(54.6, abs=0.1)
    assert approx == pytest.approx(54.6, abs=0.1)
    assert sampling_overhead(1e-4, 0) == (1.0, 1.0)


def test_sampling_overhead_approximation_regime():
    # shorthand stays within 1% of the series form while p_z1 * N <= 1
    for x in (1e-6, 1e-5, 1e-4, 1e-3, 3e-3):
        for frac in (0.1, 0.5, 1.0):
            exact, approx = sampling_overhead(x, int(frac / x))
            assert abs(approx / exact - 1) < 0.01
