"""Repeat-until-success rotation model and quasi-probability mitigation.

Each rotation attempt consumes one injected ancilla and succeeds with
probability 1/2; a failed attempt is retried with a compensated angle,
so the chain runs until the first success.  Every attempt independently
carries a small phase-flip probability, and the whole chain is treated
as a single noisy unit.  Because that unit's noise is a plain Z-flip
channel, its inverse has an explicit two-term quasi-probability form:
sample the circuit as built with weight +gamma, or with an extra Z with
weight -gamma, and average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Past this depth the stopping weight 2^-n is below double precision
# relative to any representable flip probability.
MAX_SERIES_STEPS = 64


@dataclass(frozen=True)
class RusModel:
    """Per-step behaviour of one repeat-until-success rotation chain."""

    p_z1: float = 0.0
    p_success_per_step: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.p_z1 < 0.5:
            raise ValueError(f"per-step flip probability out of range: {self.p_z1!r}")
        if not 0.0 < self.p_success_per_step <= 1.0:
            raise ValueError(
                f"success probability out of range: {self.p_success_per_step!r}"
            )


def rus_mean_steps(model: RusModel | None = None) -> float:
    """Expected number of attempts until the first success."""
    if model is None:
        model = RusModel()
    return 1.0 / model.p_success_per_step


def simulate_rus(model: RusModel, randomness: np.random.Generator):
    """Run one chain step by step; no closed-form shortcuts.

    Returns (steps, z_flip) where z_flip is the XOR of the per-step
    Bernoulli flips across every attempt, including the last.
    """
    steps = 0
    flip = False
    while True:
        steps += 1
        if randomness.random() < model.p_z1:
            flip = not flip
        if randomness.random() < model.p_success_per_step:
            return steps, flip


def simulate_rus_batch(model: RusModel, n_runs: int, randomness: np.random.Generator):
    """Vectorized version of simulate_rus: advance all live chains one
    step per pass.  Returns (steps, flips) arrays."""
    if n_runs < 1:
        raise ValueError("n_runs must be positive")
    steps = np.zeros(n_runs, dtype=np.int64)
    flips = np.zeros(n_runs, dtype=bool)
    alive = np.arange(n_runs)
    while alive.size:
        steps[alive] += 1
        flips[alive] ^= randomness.random(alive.size) < model.p_z1
        done = randomness.random(alive.size) < model.p_success_per_step
        alive = alive[~done]
    return steps, flips


def rus_error_terms(p_z1, n: int):
    """Probability of an odd flip count given the chain stops at step n.

    Sum over odd k of C(n, k) x^k (1-x)^(n-k).  Exact for Fraction
    input, which the tests exploit.
    """
    if n < 1:
        raise ValueError("step count must be positive")
    x = p_z1
    total = 0 * x
    for m in range(1, (n + 1) // 2 + 1):
        k = 2 * m - 1
        total += math.comb(n, k) * x**k * (1 - x) ** (n - k)
    return total


def rus_error_exact(p_z1: float, max_steps: int = MAX_SERIES_STEPS) -> float:
    """Flip probability of the whole chain: the stopping-weighted series
    sum_n 2^-n * rus_error_terms(p_z1, n), truncated once the weights
    fall below machine precision."""
    if not 0.0 <= p_z1 < 0.5:
        raise ValueError(f"per-step flip probability out of range: {p_z1!r}")
    return float(
        sum(0.5**n * rus_error_terms(p_z1, n) for n in range(1, max_steps + 1))
    )


@dataclass(frozen=True)
class PecPlan:
    """Cost model for cancelling n_units independent flip channels."""

    p_flip: float
    n_units: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p_flip < 0.5:
            raise ValueError(
                f"flip probability {self.p_flip!r} leaves the inverse undefined"
            )
        if self.n_units < 0:
            raise ValueError("n_units must be non-negative")

    @property
    def gamma(self) -> float:
        return 1.0 / (1.0 - 2.0 * self.p_flip)

    @property
    def overhead(self) -> float:
        return self.gamma ** (2 * self.n_units)


def pec_mitigate(
    sample_plain,
    sample_flipped,
    p_flip: float,
    n_samples: int,
    randomness: np.random.Generator,
):
    """Unbiased estimate of the noise-free expectation value.

    sample_plain / sample_flipped: callables (rng, count) -> array of
    +-1 outcomes, measured under the noisy channel and under the noisy
    channel followed by an extra Z.  Each draw comes from the flipped
    stream with probability p_flip and weight -gamma, otherwise from
    the plain stream with weight +gamma.  Returns (estimate, standard
    error of the mean).
    """
    plan = PecPlan(p_flip)
    if n_samples < 2:
        raise ValueError("need at least two samples for a standard error")
    flipped = randomness.random(n_samples) < p_flip
    vals = np.empty(n_samples, dtype=np.float64)
    n_flipped = int(np.count_nonzero(flipped))
    if n_samples - n_flipped:
        vals[~flipped] = np.asarray(
            sample_plain(randomness, n_samples - n_flipped), dtype=np.float64
        )
    if n_flipped:
        vals[flipped] = -np.asarray(
            sample_flipped(randomness, n_flipped), dtype=np.float64
        )
    signed = plan.gamma * vals
    estimate = float(signed.mean())
    sigma = float(signed.std(ddof=1) / math.sqrt(n_samples))
    return estimate, sigma


def two_outcome_sampler(mean: float):
    """A +-1 observable stream with the given expectation value."""
    if not -1.0 <= mean <= 1.0:
        raise ValueError(f"expectation value out of range: {mean!r}")
    p_plus = 0.5 * (1.0 + mean)

    def draw(randomness: np.random.Generator, count: int):
        return np.where(randomness.random(count) < p_plus, 1.0, -1.0)

    return draw


def sampling_overhead(p_z1: float, n_rotations: int):
    """Sample-count multiplier for cancelling n_rotations chain units.

    Returns (exact, approx): gamma^(2N) built from the full series flip
    probability, and the small-x shorthand e^(8 * p_z1 * N).
    """
    if n_rotations < 0:
        raise ValueError("n_rotations must be non-negative")
    plan = PecPlan(rus_error_exact(p_z1), int(n_rotations))
    return plan.overhead, math.exp(8.0 * p_z1 * n_rotations)
