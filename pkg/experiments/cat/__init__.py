"""A walk driven by a fair coin.

Trains on the shipped twenty-sample fixture. The step size is always 1, so
the xFT should settle on a constant, while the best qDT can do no better
than an even split between the two states.
"""
import pkg_resources

from scientist import series, xft
from scientist.config import RunConfig
from scientist.presets import ExperimentPreset, Thresholds

FIXTURE = "data/coin_walk.csv"

BINDINGS = xft.TerminalBindings.of(
    t=xft.IndexK(),
    d=xft.SeriesStat("d_avg"),
    av=xft.SeriesStat("av"),
    h=xft.SeriesStat("h"),
    l=xft.SeriesStat("l"),
)


def load_series():
    text = pkg_resources.resource_string(__name__, FIXTURE).decode("utf-8")
    return series.parse_csv_text(text, source=FIXTURE)


def experiment_presets():
    return [
        ExperimentPreset(
            name="cat",
            description="Coin-driven walk (20-sample fixture)",
            load_series=load_series,
            run_config=RunConfig(bindings=BINDINGS, functions=xft.ARITHMETIC),
            thresholds=Thresholds(xft_sse=1e-6, accuracy=1.0),
        ),
    ]
