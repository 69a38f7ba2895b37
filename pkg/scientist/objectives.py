"""Fitness functions binding genomes to observed data.

The xFT is scored by squared error between model and observed distances.
The qDT plays a betting game against the series: at each step it bets on
the next state and wins the observed distance when right, loses it when
wrong. Its fitness is the expected total winnings.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import qmat, xft
from .exceptions import ConfigError

log = logging.getLogger(__name__)

EXACT = "exact"
MONTE_CARLO = "monte_carlo"
MODES = (EXACT, MONTE_CARLO)


@dataclass(frozen=True)
class BetOutcome(object):
    """The expected value of one bet."""
    k: int
    state: int
    p1: float
    p2: float
    d: float
    ev: float


@dataclass(frozen=True)
class MonteCarloEstimate(object):
    mean: float
    stderr: float
    draws: int


def expected_value_step(p1, p2, state, d):
    """Expected winnings of one bet: (p1 - p2)*d in state 0, (p2 - p1)*d in state 1."""
    if state == 0:
        return (p1 - p2) * d
    return (p2 - p1) * d


def bet_outcomes(p1, p2, series):
    """Per-step BetOutcome records for fixed action probabilities."""
    return [
        BetOutcome(k, sample.q, p1, p2, d, expected_value_step(p1, p2, sample.q, d))
        for k, (sample, d) in enumerate(zip(series.samples, series.distance_array), start=1)
    ]


def state_margin(series):
    """Sum of distances in state 0 minus sum in state 1.

    A strategy with probabilities (p1, p2) earns (p1 - p2) times this.
    """
    d = series.distance_array
    states = series.state_array
    return float(np.sum(d[states == 0]) - np.sum(d[states == 1]))


def max_qdt_fitness(series):
    """The best achievable qDT fitness: every bet won."""
    return float(np.sum(series.distance_array))


def qdt_fitness(tree, series, mode=EXACT, rng=None, cap=qmat.DEFAULT_ENUMERATION_CAP,
                draws=256, normalization="squared"):
    """Expected betting winnings of `tree` over `series`.

    Exact mode averages the winnings of every strategy with equal weight.
    Monte-Carlo mode returns the mean of `draws` sampled games; see
    `qdt_fitness_monte_carlo`.
    """
    if mode == EXACT:
        p1 = qmat.strategy_probabilities(tree, cap, normalization)
        return float(np.mean(2.0 * p1 - 1.0)) * state_margin(series)
    if mode == MONTE_CARLO:
        return qdt_fitness_monte_carlo(tree, series, rng, draws, normalization).mean
    raise ConfigError("unknown qDT fitness mode {!r}".format(mode))


def qdt_fitness_monte_carlo(tree, series, rng, draws=256, normalization="squared"):
    """Play `draws` sampled games.

    Each game draws one strategy, then samples an action at every step and
    scores +d for a correct bet and -d otherwise.
    """
    if rng is None:
        raise ConfigError("monte_carlo mode needs an explicit rng")
    d = series.distance_array
    states = series.state_array
    totals = np.empty(draws)
    choices = qmat.count_choices(tree)
    cache = {}
    for draw in range(draws):
        bits = tuple(int(bit) for bit in rng.integers(0, 2, size=choices))
        if bits not in cache:
            cache[bits] = qmat.strategy(tree, bits, normalization).p1
        p1 = cache[bits]
        bets = np.where(rng.random(len(states)) < p1, 0, 1)
        totals[draw] = float(np.sum(np.where(bets == states, d, -d)))
    stderr = float(np.std(totals, ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    return MonteCarloEstimate(float(np.mean(totals)), stderr, draws)


def xft_objective(tree, series, bindings):
    """Squared-error fitness of an xFT; see `xft.xft_fitness`."""
    return xft.xft_fitness(tree, series, bindings)
