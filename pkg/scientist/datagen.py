"""Generators for the two reference experiments: a puck under constant
acceleration and a fair digital coin driving a +1/-1 walk."""
import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import UsageError
from .series import Sample, TimeSeries, derive_states

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PuckParams(object):
    """Initial velocity `v`, acceleration `a` and number of samples `steps`."""
    v: float
    a: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise UsageError("puck needs steps >= 2, got {}".format(self.steps))


@dataclass(frozen=True)
class CoinParams(object):
    """Number of coin throws and the 64-bit generator seed."""
    steps: int
    seed: int

    def __post_init__(self):
        if self.steps < 1:
            raise UsageError("coin needs steps >= 1, got {}".format(self.steps))
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("coin seed must fit in 64 bits, got {}".format(self.seed))


def gen_puck(params):
    """x_t = v*t + a*t^2/2 for t = 0..steps-1; x_0 is the t=0 value."""
    t = np.arange(params.steps, dtype=float)
    values = params.v * t + 0.5 * params.a * t * t
    return derive_states(values.tolist())


def coin_flips(params):
    """The seeded stream of fair coin values (0 or 1)."""
    rng = np.random.default_rng(params.seed)
    return rng.integers(0, 2, size=params.steps)


def gen_coin(params, flips=None):
    """A walk from x_0 = 0 stepping +1 on coin 0 and -1 on coin 1.

    `flips` overrides the seeded coin stream (any iterable of 0/1 values).
    """
    if flips is None:
        flips = coin_flips(params)
    flips = list(flips)[:params.steps]
    if len(flips) < params.steps:
        raise UsageError("coin needs {} flips, got {}".format(params.steps, len(flips)))
    x = 0
    samples = []
    for coin in flips:
        coin = int(coin)
        x += 1 if coin == 0 else -1
        samples.append(Sample(coin, float(x)))
    log.debug("Generated %d coin steps (seed %d)", len(samples), params.seed)
    return TimeSeries(0.0, tuple(samples))
