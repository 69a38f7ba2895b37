"""Shared fixtures for the tests."""
from scientist import datagen, series

PUCK_VALUES = (
    7, 20, 39, 64, 95, 132, 175, 224, 279, 340,
    407, 480, 559, 644, 735, 832, 935, 1044, 1159,
)

COIN_STATES = (1, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 1, 0)
COIN_VALUES = (-1, 0, 1, 0, 1, 0, -1, 0, 1, 2, 3, 2, 1, 2, 1, 0, 1, 0, -1, 0)


def puck_series():
    """The puck series: v=4, a=6, x0 plus 19 samples."""
    return datagen.gen_puck(datagen.PuckParams(v=4.0, a=6.0, steps=20))


def coin_walk():
    """The coin-driven walk fixture."""
    samples = tuple(series.Sample(q, float(x)) for q, x in zip(COIN_STATES, COIN_VALUES))
    return series.TimeSeries(0.0, samples)
