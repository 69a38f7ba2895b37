"""Flat `key = value` experiment config files.

Recognised keys::

    population_size, generations, crossover_prob, mutation_prob, max_depth,
    init_depth_min, init_depth_max, elitism, enumeration_cap, mc_draws, workers
    functions      = + - * /            (xFT operator subset)
    normalization  = squared | linear   (qDT eigenvalue normalization)
    qdt_mode       = exact | monte_carlo
    terminal.<name> = const:<f> | index_k | stat:<d_avg|av|h|l>

Blank lines and lines starting with `#` are ignored.
"""
import logging
from dataclasses import dataclass, field, replace

from . import qmat, settings, xft
from .evolve import GPConfig
from .exceptions import ConfigError
from .objectives import MODES
from .util import format_number

log = logging.getLogger(__name__)

INT_KEYS = ("population_size", "generations", "max_depth", "init_depth_min",
            "init_depth_max", "elitism", "enumeration_cap", "mc_draws", "workers")
FLOAT_KEYS = ("crossover_prob", "mutation_prob")
TERMINAL_PREFIX = "terminal."

XFT = "xft"
QDT = "qdt"
MAX_DEPTH_KEYS = {XFT: "xft_max_depth", QDT: "qdt_max_depth"}

DEFAULT_BINDINGS = xft.TerminalBindings.of(k=xft.IndexK())


@dataclass(frozen=True)
class RunConfig(object):
    """Everything an evolution run needs besides data and seed."""
    values: tuple = ()
    bindings: xft.TerminalBindings = DEFAULT_BINDINGS
    functions: tuple = xft.FUNCTIONS
    normalization: str = field(default_factory=lambda: settings.SCIENTIST["normalization"])
    qdt_mode: str = "exact"

    def __post_init__(self):
        unknown = [op for op in self.functions if op not in xft.FUNCTIONS]
        if unknown or not self.functions:
            raise ConfigError("bad functions {}".format(list(self.functions)))
        if self.normalization not in qmat.NORMALIZATIONS:
            raise ConfigError("bad normalization {!r}".format(self.normalization))
        if self.qdt_mode not in MODES:
            raise ConfigError("bad qdt_mode {!r}".format(self.qdt_mode))

    def value(self, key, default=None):
        return dict(self.values).get(key, default)

    def with_values(self, **values):
        merged = dict(self.values)
        merged.update(values)
        return replace(self, values=tuple(sorted(merged.items())))

    def gp_config(self, kind, seed=0):
        """The GPConfig for evolving a `kind` ("xft" or "qdt") genome."""
        given = dict(self.values)
        max_depth = given.pop("max_depth", settings.SCIENTIST[MAX_DEPTH_KEYS[kind]])
        low = given.pop("init_depth_min", None)
        high = given.pop("init_depth_max", None)
        config = GPConfig.from_settings(max_depth, seed=seed, **given)
        if low is not None or high is not None:
            default_low, default_high = config.init_depth_range
            config = replace(config, init_depth_range=(
                low if low is not None else default_low,
                high if high is not None else default_high,
            ))
        return config

    def xft_grammar(self, gp):
        return xft.ExprGrammar(terminals=self.bindings.names, functions=self.functions,
                               init_depth=gp.init_depth_range, max_depth=gp.max_depth)

    def qdt_grammar(self, gp):
        return qmat.GateGrammar(init_depth=gp.init_depth_range, max_depth=gp.max_depth)


def parse_config(text):
    """Parse config `text` into a RunConfig."""
    values = {}
    sources = {}
    extras = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError("expected 'key = value', got {!r}".format(raw), line_no)
        if key.startswith(TERMINAL_PREFIX):
            name = key[len(TERMINAL_PREFIX):]
            if name in sources:
                raise ConfigError("terminal {!r} bound twice".format(name), line_no)
            try:
                sources[name] = xft.parse_source(value)
            except ConfigError as error:
                raise ConfigError(str(error), line_no)
        elif key in INT_KEYS:
            values[key] = _convert(int, key, value, line_no)
        elif key in FLOAT_KEYS:
            values[key] = _convert(float, key, value, line_no)
        elif key == "functions":
            extras[key] = tuple(value.split())
        elif key in ("normalization", "qdt_mode"):
            extras[key] = value
        else:
            raise ConfigError("unknown key {!r}".format(key), line_no)
    bindings = xft.TerminalBindings(tuple(sorted(sources.items()))) if sources else DEFAULT_BINDINGS
    run_config = RunConfig(values=tuple(sorted(values.items())), bindings=bindings, **extras)
    # validate the GP values eagerly so errors surface at load time
    run_config.gp_config(XFT)
    return run_config


def load_config(path):
    """Read and parse a config file."""
    with open(path) as handle:
        run_config = parse_config(handle.read())
    log.debug("Loaded config %s", path)
    return run_config


def dump_config(run_config):
    """Render `run_config` so that parse_config(dump_config(c)) == c."""
    lines = []
    for key, value in run_config.values:
        lines.append("{} = {}".format(key, format_number(value) if key in FLOAT_KEYS else value))
    lines.append("functions = {}".format(" ".join(run_config.functions)))
    lines.append("normalization = {}".format(run_config.normalization))
    lines.append("qdt_mode = {}".format(run_config.qdt_mode))
    for name, source in run_config.bindings.sources:
        lines.append("{}{} = {}".format(TERMINAL_PREFIX, name, xft.source_text(source)))
    return "\n".join(lines) + "\n"


def _convert(kind, key, value, line_no):
    try:
        return kind(value)
    except ValueError:
        raise ConfigError("{} expects a number, got {!r}".format(key, value), line_no)
