"""Observation function trees (xFT).

An xFT is a symbolic expression over an index `k` and named terminals. The
model distance between consecutive observations is the difference of the
tree evaluated at k and k-1, and the tree is scored by the negative sum of
squared errors against the observed absolute distances.

Evaluation uses protected operators so that every tree is total:

* x / y is 1 when |y| < 1e-12,
* log(x) is log|x|, with log(0) = 0,
* exp clamps its argument to [-60, 60],
* every intermediate value is clamped to +/-1e100.
"""
import logging
import re
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from . import sexp, trees
from .exceptions import ConfigError, ParseError, ScientistError, UnresolvedTerminalError
from .series import STAT_NAMES
from .util import format_number

log = logging.getLogger(__name__)

BINARY_OPS = ("+", "-", "*", "/")
UNARY_OPS = ("sin", "cos", "log", "exp")
FUNCTIONS = BINARY_OPS + UNARY_OPS
ARITHMETIC = BINARY_OPS

DIVISION_GUARD = 1e-12
EXP_LIMIT = 60.0
VALUE_LIMIT = 1e100

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# ---- Nodes -----

@dataclass(frozen=True)
class Terminal(object):
    name: str
    children = ()

    def rebuild(self, children):
        return self


@dataclass(frozen=True)
class UnaryOp(object):
    op: str
    child: object

    @property
    def children(self):
        return (self.child,)

    def rebuild(self, children):
        return UnaryOp(self.op, children[0])


@dataclass(frozen=True)
class BinaryOp(object):
    op: str
    left: object
    right: object

    @property
    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return BinaryOp(self.op, children[0], children[1])


def terminals(tree):
    """The set of terminal names used in `tree`."""
    return {node.name for _, node in trees.walk(tree) if isinstance(node, Terminal)}


depth = trees.depth
size = trees.size


# ---- Terminal bindings -----

@dataclass(frozen=True)
class IndexK(object):
    """The terminal takes the current index k."""


@dataclass(frozen=True)
class NamedConstant(object):
    value: float


@dataclass(frozen=True)
class SeriesStat(object):
    """The terminal takes a statistic (d_avg, av, h or l) of the training series."""
    stat: str

    def __post_init__(self):
        if self.stat not in STAT_NAMES:
            raise ConfigError("unknown series statistic {!r}".format(self.stat))


def parse_source(text):
    """Parse `const:<f>`, `index_k` or `stat:<name>`."""
    text = text.strip()
    if text == "index_k":
        return IndexK()
    kind, _, arg = text.partition(":")
    if kind == "const" and arg:
        try:
            return NamedConstant(float(arg))
        except ValueError:
            raise ConfigError("bad constant {!r}".format(arg))
    if kind == "stat" and arg:
        return SeriesStat(arg.strip())
    raise ConfigError("bad terminal source {!r}".format(text))


def source_text(source):
    """Inverse of `parse_source`."""
    if isinstance(source, IndexK):
        return "index_k"
    if isinstance(source, NamedConstant):
        return "const:{}".format(format_number(source.value))
    return "stat:{}".format(source.stat)


@dataclass(frozen=True)
class TerminalBindings(object):
    """Maps terminal names to their value sources.

    Statistic sources need the statistics of a training series; `bind`
    returns a copy carrying them.
    """
    sources: tuple
    stats: object = field(default=None, compare=False)

    def __post_init__(self):
        names = [name for name, _ in self.sources]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate terminal names in {}".format(names))
        for name in names:
            if not _NAME.match(name) or name in FUNCTIONS:
                raise ConfigError("bad terminal name {!r}".format(name))

    @classmethod
    def of(cls, **sources):
        """Bindings from keyword arguments, e.g. `of(t=IndexK(), o=NamedConstant(1))`."""
        return cls(tuple(sorted(sources.items())))

    @property
    def names(self):
        return tuple(name for name, _ in self.sources)

    def source(self, name):
        for key, source in self.sources:
            if key == name:
                return source
        raise UnresolvedTerminalError(name)

    def needs_stats(self):
        return any(isinstance(source, SeriesStat) for _, source in self.sources)

    def bind(self, series):
        """A copy resolving statistics against `series`."""
        return dc_replace(self, stats=series.stats)

    def environment(self, ks):
        """Terminal values for the index array `ks`."""
        env = {}
        for name, source in self.sources:
            if isinstance(source, IndexK):
                env[name] = ks
            elif isinstance(source, NamedConstant):
                env[name] = source.value
            else:
                if self.stats is None:
                    raise ScientistError(
                        "terminal {!r} needs series statistics; bind the "
                        "bindings to a series first".format(name)
                    )
                env[name] = self.stats.value(source.stat)
        return env

    def check(self, tree):
        """Raise UnresolvedTerminalError unless every terminal of `tree` is bound."""
        known = set(self.names)
        for name in sorted(terminals(tree)):
            if name not in known:
                raise UnresolvedTerminalError(name)


# ---- Evaluation -----

def _clamp(values):
    return np.clip(values, -VALUE_LIMIT, VALUE_LIMIT)


def _protected_div(left, right):
    small = np.abs(right) < DIVISION_GUARD
    safe = np.where(small, 1.0, right)
    return np.where(small, 1.0, left / safe)


def _protected_log(values):
    magnitude = np.abs(values)
    zero = magnitude == 0.0
    return np.where(zero, 0.0, np.log(np.where(zero, 1.0, magnitude)))


_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": _protected_div,
}

_UNARY = {
    "sin": np.sin,
    "cos": np.cos,
    "log": _protected_log,
    "exp": lambda values: np.exp(np.clip(values, -EXP_LIMIT, EXP_LIMIT)),
}


def _evaluate(tree, env):
    if isinstance(tree, Terminal):
        try:
            return env[tree.name]
        except KeyError:
            raise UnresolvedTerminalError(tree.name)
    if isinstance(tree, UnaryOp):
        return _clamp(_UNARY[tree.op](_evaluate(tree.child, env)))
    return _clamp(_BINARY[tree.op](_evaluate(tree.left, env), _evaluate(tree.right, env)))


def evaluate(tree, ks, env):
    """Evaluate `tree` at every index of the array `ks`."""
    with np.errstate(all="ignore"):
        result = _evaluate(tree, env)
    return np.broadcast_to(np.asarray(result, dtype=float), np.shape(ks)).copy()


def eval_at(tree, k, bindings):
    """The value of `tree` at index `k`."""
    ks = np.array([float(k)])
    return float(evaluate(tree, ks, bindings.environment(ks))[0])


def distance(tree, k, bindings):
    """Model distance d'(k, k-1) = f(k) - f(k-1); signed."""
    return eval_at(tree, k, bindings) - eval_at(tree, k - 1, bindings)


def model_distances(tree, series, bindings):
    """Model distances for k = 1..N as an array."""
    if bindings.stats is None and bindings.needs_stats():
        bindings = bindings.bind(series)
    ks = np.arange(len(series) + 1, dtype=float)
    return np.diff(evaluate(tree, ks, bindings.environment(ks)))


def xft_fitness(tree, series, bindings):
    """-sum_k (d'_k - d_k)^2; zero exactly when every model distance matches."""
    errors = model_distances(tree, series, bindings) - series.distance_array
    return 0.0 - float(np.sum(errors * errors))


# ---- Genetic operators -----

@dataclass(frozen=True)
class ExprGrammar(object):
    """The primitive set and depth bounds for growing expression trees."""
    terminals: tuple
    functions: tuple = FUNCTIONS
    init_depth: tuple = (2, 6)
    max_depth: int = 10

    def __post_init__(self):
        if not self.terminals:
            raise ConfigError("an xFT grammar needs at least one terminal")
        unknown = [op for op in self.functions if op not in FUNCTIONS]
        if unknown:
            raise ConfigError("unknown xFT functions {}".format(unknown))
        if not self.functions:
            raise ConfigError("an xFT grammar needs at least one function")
        low, high = self.init_depth
        if not 1 <= low <= high <= self.max_depth:
            raise ConfigError(
                "need 1 <= init depth {}..{} <= max depth {}".format(low, high, self.max_depth)
            )


def _random_terminal(grammar, rng):
    return Terminal(grammar.terminals[rng.integers(len(grammar.terminals))])


def _random_function(grammar, rng, depth_left, full):
    op = grammar.functions[rng.integers(len(grammar.functions))]
    grow = lambda: _grow(grammar, rng, depth_left - 1, full)  # noqa: E731
    if op in UNARY_OPS:
        return UnaryOp(op, grow())
    return BinaryOp(op, grow(), grow())


def _grow(grammar, rng, depth_left, full):
    if depth_left <= 1:
        return _random_terminal(grammar, rng)
    if not full:
        primitives = len(grammar.functions) + len(grammar.terminals)
        if rng.integers(primitives) >= len(grammar.functions):
            return _random_terminal(grammar, rng)
    return _random_function(grammar, rng, depth_left, full)


def random_tree(grammar, rng, max_depth=None):
    """Ramped half-and-half: a depth from the init range, then full or grow.

    The root is always a function unless the chosen depth is 1.
    """
    low, high = grammar.init_depth
    if max_depth is not None:
        high = min(high, max_depth)
        low = min(low, high)
    tree_depth = int(rng.integers(low, high + 1))
    if tree_depth <= 1:
        return _random_terminal(grammar, rng)
    full = bool(rng.integers(2))
    return _random_function(grammar, rng, tree_depth, full)


def crossover(first, second, rng, max_depth=10):
    """Swap uniformly chosen subtrees; over-deep offspring revert to their parent."""
    return trees.swap_subtrees(first, second, rng, max_depth)


def mutate(tree, grammar, rng):
    """Replace a uniformly chosen subtree with a fresh random one."""
    def fresh(path, limit):
        if not path:
            return random_tree(grammar, rng)
        return random_tree(grammar, rng, max_depth=max(1, limit))
    return trees.mutate_subtree(tree, rng, grammar.max_depth, fresh)


# ---- Text -----

def to_text(tree):
    """Fully parenthesized prefix form, e.g. `(+ (* v t) (* (* h a) (* t t)))`."""
    if isinstance(tree, Terminal):
        return tree.name
    return "({} {})".format(tree.op, " ".join(to_text(child) for child in tree.children))


def parse_text(text):
    """Inverse of `to_text`."""
    return _build(sexp.read(text))


def _build(form):
    if isinstance(form, sexp.Symbol):
        if not _NAME.match(form.name) or form.name in FUNCTIONS:
            raise ParseError("bad terminal {!r}".format(form.name), form.position, "terminal name")
        return Terminal(form.name)
    if not form.items or not isinstance(form.items[0], sexp.Symbol):
        raise ParseError("missing operator", form.position + 1, "operator")
    head, args = form.items[0], form.items[1:]
    if head.name in BINARY_OPS:
        arity = 2
    elif head.name in UNARY_OPS:
        arity = 1
    else:
        raise ParseError("unknown operator {!r}".format(head.name), head.position, "operator")
    if len(args) != arity:
        raise ParseError(
            "{!r} takes {} operand(s), got {}".format(head.name, arity, len(args)),
            form.position, "{} operand(s)".format(arity),
        )
    children = [_build(arg) for arg in args]
    if arity == 1:
        return UnaryOp(head.name, children[0])
    return BinaryOp(head.name, children[0], children[1])


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_infix(tree):
    """Human-readable form, e.g. `v*t + (h*a)*(t*t)`."""
    if isinstance(tree, Terminal):
        return tree.name
    if isinstance(tree, UnaryOp):
        return "{}({})".format(tree.op, to_infix(tree.child))
    level = _PRECEDENCE[tree.op]
    left = _infix_operand(tree.left, level, tree.op, right_side=False)
    right = _infix_operand(tree.right, level, tree.op, right_side=True)
    if level == 1:
        return "{} {} {}".format(left, tree.op, right)
    return "{}{}{}".format(left, tree.op, right)


def _infix_operand(child, level, op, right_side):
    text = to_infix(child)
    if not isinstance(child, BinaryOp):
        return text
    child_level = _PRECEDENCE[child.op]
    wrap = (child_level < level
            or (level == 2 and child_level == 2)
            or (op == "-" and right_side))
    return "({})".format(text) if wrap else text
