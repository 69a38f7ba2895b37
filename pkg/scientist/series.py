"""State/value time series: the entity trajectory the machine scientist learns.

A series is an initial value `x0` followed by samples (q_k, x_k), k = 1..N.
The state q_k is 0 when the value did not decrease (x_k >= x_{k-1}) and 1
otherwise.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass

import numpy as np
from lazy import lazy

from .exceptions import SeriesError
from .util import format_number

log = logging.getLogger(__name__)

HEADER = ("q", "x")
X0_PREFIX = "# x0="

STAT_NAMES = ("d_avg", "av", "h", "l")


@dataclass(frozen=True)
class Sample(object):
    """One observation: state bit `q` and value `x`."""
    q: int
    x: float

    def __post_init__(self):
        if self.q not in (0, 1):
            raise SeriesError("state must be 0 or 1, got {!r}".format(self.q))
        if not math.isfinite(self.x):
            raise SeriesError("value must be finite, got {!r}".format(self.x))


@dataclass(frozen=True)
class SeriesStats(object):
    """Summary statistics of a series.

    `h`, `l` and `av` include x0; the state frequencies count only the N
    decided samples.
    """
    d_avg: float
    av: float
    h: float
    l: float
    freq0: float
    freq1: float

    def value(self, name):
        """Look up one of the bindable statistics by name."""
        if name not in STAT_NAMES:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True)
class Trajectory(object):
    """An initial value and an ordered tuple of samples.

    Trajectories produced by a model need not satisfy the state rule; see
    `TimeSeries` for observed data.
    """
    x0: float
    samples: tuple

    def __post_init__(self):
        if not math.isfinite(self.x0):
            raise SeriesError("x0 must be finite, got {!r}".format(self.x0), index=0)
        if not self.samples:
            raise SeriesError("a series needs at least one sample")

    def __len__(self):
        return len(self.samples)

    def values(self):
        """Return (x0, x1, ..., xN)."""
        return (self.x0,) + tuple(s.x for s in self.samples)

    def states(self):
        """Return (q1, ..., qN)."""
        return tuple(s.q for s in self.samples)

    @lazy
    def value_array(self):
        return np.array(self.values(), dtype=float)

    @lazy
    def state_array(self):
        return np.array(self.states(), dtype=int)


@dataclass(frozen=True)
class TimeSeries(Trajectory):
    """An observed series; every state agrees with the direction of change."""

    def __post_init__(self):
        super(TimeSeries, self).__post_init__()
        previous = self.x0
        for index, sample in enumerate(self.samples, start=1):
            expected = state_of(previous, sample.x)
            if sample.q != expected:
                raise SeriesError(
                    "sample {} has state {} but {} -> {} implies state {}".format(
                        index, sample.q, format_number(previous),
                        format_number(sample.x), expected),
                    index=index,
                )
            previous = sample.x

    @lazy
    def distance_array(self):
        return np.abs(np.diff(self.value_array))

    @lazy
    def stats(self):
        return stats(self)


def state_of(previous, current):
    """The state implied by moving from `previous` to `current`."""
    return 0 if current >= previous else 1


def derive_states(values):
    """Build a TimeSeries from raw values, the first being x0."""
    values = list(values)
    if len(values) < 2:
        raise SeriesError("need x0 and at least one value, got {}".format(len(values)))
    for index, value in enumerate(values):
        if not math.isfinite(value):
            raise SeriesError(
                "value {} is not finite: {!r}".format(index, value), index=index
            )
    samples = tuple(
        Sample(state_of(prev, cur), float(cur))
        for prev, cur in zip(values, values[1:])
    )
    return TimeSeries(float(values[0]), samples)


def distances(series):
    """Observed absolute distances |x_k - x_{k-1}|, k = 1..N."""
    return tuple(float(d) for d in series.distance_array)


def stats(series):
    """Compute the SeriesStats of `series`."""
    values = series.value_array
    states = series.state_array
    count = float(len(states))
    freq0 = float(np.count_nonzero(states == 0)) / count
    return SeriesStats(
        d_avg=float(np.mean(np.abs(np.diff(values)))),
        av=float(np.mean(values)),
        h=float(np.max(values)),
        l=float(np.min(values)),
        freq0=freq0,
        freq1=1.0 - freq0,
    )


def to_csv_text(series):
    """Render `series` in the `q,x` CSV format with its x0 comment."""
    out = io.StringIO()
    out.write("{}{}\n".format(X0_PREFIX, format_number(series.x0)))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for sample in series.samples:
        writer.writerow((sample.q, format_number(sample.x)))
    return out.getvalue()


def write_csv(series, path):
    """Write `series` to `path`."""
    with open(path, "w") as handle:
        handle.write(to_csv_text(series))
    log.debug("Wrote %d samples to %s", len(series), path)


def parse_csv_text(text, source="<string>"):
    """Parse the `q,x` CSV format. Errors name the offending line."""
    x0 = 0.0
    header_seen = False
    samples = []
    rows = csv.reader(io.StringIO(text))
    for line_no, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        first = row[0].strip()
        if first.startswith("#"):
            joined = ",".join(row).strip()
            if joined.startswith(X0_PREFIX) and not header_seen:
                x0 = _parse_value(joined[len(X0_PREFIX):], line_no, source)
            continue
        if not header_seen:
            if tuple(cell.strip() for cell in row) != HEADER:
                raise SeriesError(
                    "{}:{}: expected header 'q,x'".format(source, line_no), line=line_no
                )
            header_seen = True
            continue
        if len(row) != 2:
            raise SeriesError(
                "{}:{}: expected 2 columns, got {}".format(source, line_no, len(row)),
                line=line_no,
            )
        q_text = row[0].strip()
        if q_text not in ("0", "1"):
            raise SeriesError(
                "{}:{}: state must be 0 or 1, got {!r}".format(source, line_no, q_text),
                index=len(samples) + 1, line=line_no,
            )
        value = _parse_value(row[1], line_no, source)
        samples.append(Sample(int(q_text), value))
    if not header_seen:
        raise SeriesError("{}: missing header 'q,x'".format(source))
    if not samples:
        raise SeriesError("{}: no samples".format(source))
    return TimeSeries(x0, tuple(samples))


def read_csv(path):
    """Read a TimeSeries from `path`."""
    with open(path) as handle:
        series = parse_csv_text(handle.read(), source=path)
    log.debug("Read %d samples from %s", len(series), path)
    return series


def _parse_value(text, line_no, source):
    try:
        value = float(text.strip())
    except ValueError:
        raise SeriesError(
            "{}:{}: bad value {!r}".format(source, line_no, text), line=line_no
        )
    if not math.isfinite(value):
        raise SeriesError(
            "{}:{}: value is not finite: {!r}".format(source, line_no, text), line=line_no
        )
    return value
