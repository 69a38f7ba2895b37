"""A puck sliding under constant acceleration.

The generator draws x_t = v*t + a*t^2/2 with v = 4 and a = 6 for twenty
samples. Evolution should recover the distance law d_t = v + a*t - a/2
from the terminals t, v, a, o = 1 and h = 1/2.
"""
from scientist import datagen, xft
from scientist.config import RunConfig
from scientist.presets import ExperimentPreset, Thresholds

PUCK = datagen.PuckParams(v=4.0, a=6.0, steps=20)

BINDINGS = xft.TerminalBindings.of(
    t=xft.IndexK(),
    v=xft.NamedConstant(4.0),
    a=xft.NamedConstant(6.0),
    o=xft.NamedConstant(1.0),
    h=xft.NamedConstant(0.5),
)


def load_series():
    return datagen.gen_puck(PUCK)


def experiment_presets():
    return [
        ExperimentPreset(
            name="newton",
            description="Puck under constant acceleration (v=4, a=6, 20 samples)",
            load_series=load_series,
            run_config=RunConfig(bindings=BINDINGS, functions=xft.ARITHMETIC),
            thresholds=Thresholds(xft_sse=1e-6, accuracy=1.0, qdt_fraction=1.0),
        ),
    ]
