"""Theories: an evolved (xFT, qDT) pair with its terminal bindings.

A theory reconstructs an observed trajectory and forecasts future samples.
At each step the xFT gives the model distance d' and the state q' decides
its direction:

    x'_k = x'_{k-1} + d'_k  if q'_k = 0
    x'_k = x'_{k-1} - d'_k  if q'_k = 1

Reconstruction either feeds the observed states in (teacher forcing) or
samples them from the qDT (free run). Forecasts always sample from the
qDT, using one strategy for the whole run.
"""
import csv
import io
import logging
from dataclasses import dataclass

import numpy as np
from fs.errors import CreateFailed, ResourceNotFound
from fs.osfs import OSFS

from . import qmat, xft
from .config import TERMINAL_PREFIX
from .exceptions import (
    BundleError, ConfigError, ParseError, SeriesError, UnresolvedTerminalError, UsageError,
)
from .series import Sample, Trajectory
from .util import format_number

log = logging.getLogger(__name__)

TEACHER_FORCED = "teacher_forced"
FREE_RUN = "free_run"

XFT_FILE = "xft.sexp"
QDT_FILE = "qdt.sexp"
BINDINGS_FILE = "bindings.cfg"
PROVENANCE_FILE = "provenance.cfg"


@dataclass(frozen=True)
class Theory(object):
    xft: object
    qdt: object
    bindings: xft.TerminalBindings
    provenance: tuple = ()

    def __post_init__(self):
        self.bindings.check(self.xft)

    @property
    def normalization(self):
        return dict(self.provenance).get("normalization", "squared")


@dataclass(frozen=True)
class ForecastStep(object):
    k: int
    q_pred: int
    x_pred: float
    p1: float
    strategy: tuple


@dataclass(frozen=True)
class Forecast(object):
    steps: tuple

    def to_csv_text(self):
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("k", "q_pred", "x_pred", "p1", "strategy"))
        for step in self.steps:
            writer.writerow((step.k, step.q_pred, format_number(step.x_pred),
                             repr(float(step.p1)), "".join(str(bit) for bit in step.strategy)))
        return out.getvalue()

    def write_csv(self, path):
        with open(path, "w") as handle:
            handle.write(self.to_csv_text())


def _bound(theory, series):
    if theory.bindings.needs_stats():
        return theory.bindings.bind(series)
    return theory.bindings


def _draw_strategy(theory, rng):
    return qmat.sample_strategy(theory.qdt, rng, theory.normalization)


def _step(previous, d, state):
    return previous + d if state == 0 else previous - d


def reconstruct(theory, series, mode=TEACHER_FORCED, rng=None):
    """Rebuild `series` from x0 with the theory's model distances.

    Returns a Trajectory, which need not satisfy the observed-series state
    rule.
    """
    model = xft.model_distances(theory.xft, series, _bound(theory, series))
    if mode == TEACHER_FORCED:
        states = series.states()
    elif mode == FREE_RUN:
        if rng is None:
            raise UsageError("free_run reconstruction needs an rng")
        p1 = _draw_strategy(theory, rng).p1
        states = tuple(0 if qmat.sample_action(p1, rng) == 1 else 1 for _ in series.samples)
    else:
        raise UsageError("unknown reconstruction mode {!r}".format(mode))
    x = series.x0
    samples = []
    for state, d in zip(states, model):
        x = _step(x, float(d), state)
        samples.append(Sample(state, x))
    return Trajectory(series.x0, tuple(samples))


def accuracy(reconstructed, observed, tolerance=1e-9):
    """Fraction of samples whose state matches and value is within `tolerance`."""
    if len(reconstructed) != len(observed):
        raise SeriesError("cannot compare series of length {} and {}".format(
            len(reconstructed), len(observed)))
    hits = sum(
        1 for rebuilt, seen in zip(reconstructed.samples, observed.samples)
        if rebuilt.q == seen.q and abs(rebuilt.x - seen.x) <= tolerance
    )
    return hits / float(len(observed))


def predict(theory, series, horizon, rng):
    """Forecast `horizon` samples past the end of `series`.

    One strategy is drawn for the run; each step samples the state from it
    and moves the last value by the model distance at the continued index.
    """
    if horizon < 1:
        raise UsageError("horizon must be at least 1, got {}".format(horizon))
    chosen = _draw_strategy(theory, rng)
    bindings = _bound(theory, series)
    last = len(series)
    ks = np.arange(last, last + horizon + 1, dtype=float)
    model = np.diff(xft.evaluate(theory.xft, ks, bindings.environment(ks)))
    x = series.samples[-1].x
    steps = []
    for offset, d in enumerate(model, start=1):
        state = 0 if qmat.sample_action(chosen.p1, rng) == 1 else 1
        x = _step(x, float(d), state)
        steps.append(ForecastStep(last + offset, state, x, chosen.p1, chosen.choices))
    return Forecast(tuple(steps))


def forecast_state_frequency(theory, series, draws, rng):
    """Fraction of `draws` independent one-step forecasts predicting state 0."""
    zeros = sum(1 for _ in range(draws) if predict(theory, series, 1, rng).steps[0].q_pred == 0)
    return zeros / float(draws)


# ---- Bundles -----

def _flat(pairs):
    return "".join("{} = {}\n".format(key, value) for key, value in pairs)


def _parse_flat(text, filename):
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise BundleError("line {}: expected 'key = value'".format(line_no), filename)
        pairs.append((key.strip(), value.strip()))
    return pairs


def save(theory, directory):
    """Write `theory` as a bundle directory."""
    with OSFS(directory, create=True) as bundle:
        bundle.writetext(XFT_FILE, xft.to_text(theory.xft) + "\n")
        bundle.writetext(QDT_FILE, qmat.gate_tree_text(theory.qdt) + "\n")
        bundle.writetext(BINDINGS_FILE, _flat(
            (TERMINAL_PREFIX + name, xft.source_text(source))
            for name, source in theory.bindings.sources))
        bundle.writetext(PROVENANCE_FILE, _flat(theory.provenance))
    log.info("Saved theory to %s", directory)


def load(directory):
    """Read a bundle directory written by `save`."""
    try:
        bundle = OSFS(directory)
    except CreateFailed:
        raise BundleError("bundle directory does not exist", directory)
    with bundle:
        texts = {}
        for filename in (XFT_FILE, QDT_FILE, BINDINGS_FILE, PROVENANCE_FILE):
            try:
                texts[filename] = bundle.readtext(filename)
            except ResourceNotFound:
                raise BundleError("missing from bundle {}".format(directory), filename)

    try:
        tree = xft.parse_text(texts[XFT_FILE].strip())
    except ParseError as error:
        raise BundleError(str(error), XFT_FILE)
    try:
        gate_tree = qmat.parse_gate_tree(texts[QDT_FILE].strip())
    except ParseError as error:
        raise BundleError(str(error), QDT_FILE)

    sources = []
    for key, value in _parse_flat(texts[BINDINGS_FILE], BINDINGS_FILE):
        if not key.startswith(TERMINAL_PREFIX):
            raise BundleError("unknown key {!r}".format(key), BINDINGS_FILE)
        try:
            sources.append((key[len(TERMINAL_PREFIX):], xft.parse_source(value)))
        except ConfigError as error:
            raise BundleError(str(error), BINDINGS_FILE)
    try:
        bindings = xft.TerminalBindings(tuple(sorted(sources, key=lambda item: item[0])))
        theory = Theory(tree, gate_tree, bindings,
                        tuple(_parse_flat(texts[PROVENANCE_FILE], PROVENANCE_FILE)))
    except (ConfigError, UnresolvedTerminalError) as error:
        raise BundleError(str(error), BINDINGS_FILE)
    log.debug("Loaded theory from %s", directory)
    return theory
