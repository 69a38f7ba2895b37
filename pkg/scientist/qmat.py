"""State decision trees (qDT): matrix-valued trees over eight 2x2 gates.

A gate tree combines gate leaves with matrix sum (`+`), matrix product
(`*`, left times right) and random choice (`//`). Fixing every choice node
gives a strategy: a concrete matrix which, after diagonalization and
normalization, yields the probabilities of the two actions

    a1: bet the state is 0,    a2: bet the state is 1.

Eigenvalue to action assignment: eigenpairs are ordered by descending
modulus (ties: descending real part, then descending imaginary part). The
leading eigenvalue goes to a1 when its eigenvector's first component is at
least as large in modulus as the second, and to a2 otherwise; the other
eigenvalue takes the remaining action.
"""
import cmath
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from . import sexp, trees
from .exceptions import ConfigError, EnumerationCapError, ParseError, ScientistError, UnknownGateError

log = logging.getLogger(__name__)

GATE_NAMES = ("H", "X", "Y", "Z", "S", "D", "T", "I")
OPERATORS = ("+", "*", "//")

DEFAULT_ENUMERATION_CAP = 12
DEGENERATE = 1e-12
TIE_TOLERANCE = 1e-12
NORMALIZATIONS = ("squared", "linear")


@dataclass(frozen=True)
class CMatrix2(object):
    """A complex 2x2 matrix [[m11, m12], [m21, m22]]."""
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self):
        for entry in self.entries():
            if not cmath.isfinite(entry):
                raise ScientistError("matrix entries must be finite: {!r}".format(self))

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(complex(a), complex(b), complex(c), complex(d))

    def entries(self):
        return (self.m11, self.m12, self.m21, self.m22)

    def rows(self):
        return ((self.m11, self.m12), (self.m21, self.m22))

    def as_array(self):
        return np.array(self.rows(), dtype=complex)

    def __add__(self, other):
        return CMatrix2(self.m11 + other.m11, self.m12 + other.m12,
                        self.m21 + other.m21, self.m22 + other.m22)

    def __matmul__(self, other):
        return CMatrix2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def trace(self):
        return self.m11 + self.m22

    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def scale(self):
        """Largest entry modulus (at least 1); used for relative tolerances."""
        return max(1.0, max(abs(entry) for entry in self.entries()))

    def close_to(self, other, tolerance=1e-9):
        return all(abs(a - b) <= tolerance for a, b in zip(self.entries(), other.entries()))


_R = 1.0 / math.sqrt(2.0)

_GATES = {
    "H": CMatrix2(_R, _R, _R, -_R),
    "X": CMatrix2(0, 1, 1, 0),
    "Y": CMatrix2(0, -1j, 1j, 0),
    "Z": CMatrix2(1, 0, 0, -1),
    "S": CMatrix2(1, 0, 0, 1j),
    "D": CMatrix2(0, 1, -1, 0),
    "T": CMatrix2(1, 0, 0, cmath.exp(1j * math.pi / 4)),
    "I": CMatrix2(1, 0, 0, 1),
}

ZERO = CMatrix2(0, 0, 0, 0)


def gate(name):
    """The matrix of gate `name`."""
    try:
        return _GATES[name]
    except KeyError:
        raise UnknownGateError("unknown gate {!r}; expected one of {}".format(
            name, " ".join(GATE_NAMES)))


# ---- Gate tree nodes -----

@dataclass(frozen=True)
class Leaf(object):
    gate: str
    children = ()

    def rebuild(self, children):
        return self


@dataclass(frozen=True)
class Add(object):
    left: object
    right: object
    op = "+"

    @property
    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return Add(*children)


@dataclass(frozen=True)
class Mul(object):
    left: object
    right: object
    op = "*"

    @property
    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return Mul(*children)


@dataclass(frozen=True)
class Choice(object):
    left: object
    right: object
    op = "//"

    @property
    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return Choice(*children)


_NODE_FOR_OP = {"+": Add, "*": Mul, "//": Choice}

depth = trees.depth
size = trees.size


def count_choices(tree):
    return sum(1 for _, node in trees.walk(tree) if isinstance(node, Choice))


# ---- Strategies -----

@dataclass(frozen=True)
class Strategy(object):
    """One full resolution of a gate tree's choice nodes."""
    choices: tuple
    matrix: CMatrix2
    p1: float
    p2: float


@dataclass(frozen=True)
class EigenPair(object):
    """An eigenvalue and unit eigenvector. `defective` marks a duplicated
    vector of a non-diagonalizable matrix."""
    lam: complex
    vector: tuple
    defective: bool = False


def _resolve(tree, bits, offset):
    if isinstance(tree, Leaf):
        return gate(tree.gate), offset
    if isinstance(tree, Choice):
        bit = bits[offset]
        left, offset_after_left = _resolve(tree.left, bits, offset + 1)
        right, offset_after_right = _resolve(tree.right, bits, offset_after_left)
        return (right if bit else left), offset_after_right
    left, offset = _resolve(tree.left, bits, offset)
    right, offset = _resolve(tree.right, bits, offset)
    if isinstance(tree, Add):
        return left + right, offset
    return left @ right, offset


def resolve(tree, choices=()):
    """The matrix of `tree` with its choice nodes fixed by `choices`.

    `choices` holds one bit per choice node in depth-first order; 0 takes
    the left branch.
    """
    choices = tuple(int(bit) for bit in choices)
    expected = count_choices(tree)
    if len(choices) != expected:
        raise ScientistError(
            "tree has {} choice nodes but {} choices were given".format(expected, len(choices))
        )
    matrix, _ = _resolve(tree, choices, 0)
    return matrix


def _unit(vector):
    first, second = vector
    norm = math.sqrt(abs(first) ** 2 + abs(second) ** 2)
    first, second = first / norm, second / norm
    # fix the global phase: largest component real and positive (first on ties)
    pivot = first if abs(first) >= abs(second) else second
    phase = pivot / abs(pivot)
    return (first / phase, second / phase)


def _eigenvector(matrix, lam):
    from_row1 = (matrix.m12, lam - matrix.m11)
    from_row2 = (lam - matrix.m22, matrix.m21)
    norm1 = abs(from_row1[0]) + abs(from_row1[1])
    norm2 = abs(from_row2[0]) + abs(from_row2[1])
    best, norm = (from_row1, norm1) if norm1 >= norm2 else (from_row2, norm2)
    if norm <= DEGENERATE * matrix.scale():
        return None
    return _unit(best)


def eigen2(matrix):
    """Closed-form eigenpairs of a 2x2 matrix.

    Roots of lambda^2 - tr(M) lambda + det(M). For a defective matrix the
    second pair repeats the first vector and is flagged.
    """
    tr = matrix.trace()
    det = matrix.det()
    root = cmath.sqrt(tr * tr - 4 * det)
    if abs(tr - root) > abs(tr + root):
        root = -root
    lam1 = (tr + root) / 2
    lam2 = det / lam1 if lam1 != 0 else (tr - root) / 2

    vec1 = _eigenvector(matrix, lam1)
    vec2 = _eigenvector(matrix, lam2)
    if vec1 is None and vec2 is None:
        # scalar matrix: every vector is an eigenvector
        return EigenPair(lam1, (1 + 0j, 0j)), EigenPair(lam2, (0j, 1 + 0j))
    repeated = abs(lam1 - lam2) <= 1e-9 * matrix.scale()
    if vec1 is None:
        vec1 = vec2
    if vec2 is None or repeated:
        return EigenPair(lam1, vec1), EigenPair(lam2, vec1, defective=repeated)
    return EigenPair(lam1, vec1), EigenPair(lam2, vec2)


def _weights(a, b, c, d, lam, scale):
    """Moduli of the unit eigenvector components for `lam`, and whether
    the eigenvector is determined at all."""
    from_row1 = np.abs(b) + np.abs(lam - a) >= np.abs(lam - d) + np.abs(c)
    x = np.where(from_row1, b, lam - d)
    y = np.where(from_row1, lam - a, c)
    norm = np.abs(x) + np.abs(y)
    length = np.hypot(np.abs(x), np.abs(y))
    length = np.where(length > 0, length, 1.0)
    return np.abs(x) / length, np.abs(y) / length, norm > DEGENERATE * scale


def _leads(first, second):
    """True where eigenvalue `second` orders before `first`: larger modulus,
    then larger real part, then larger imaginary part."""
    m1, m2 = np.round(np.abs(first), 12), np.round(np.abs(second), 12)
    r1, r2 = np.round(first.real, 12), np.round(second.real, 12)
    i1, i2 = np.round(first.imag, 12), np.round(second.imag, 12)
    return (m2 > m1) | ((m2 == m1) & ((r2 > r1) | ((r2 == r1) & (i2 > i1))))


def stack_probabilities(stack, normalization="squared"):
    """p1 for every matrix of an (n, 2, 2) complex stack.

    Vectorized form of the eigen decomposition in `eigen2` followed by the
    eigenvalue to action assignment; p2 is 1 - p1.
    """
    if normalization not in NORMALIZATIONS:
        raise ConfigError("unknown normalization {!r}".format(normalization))
    stack = np.asarray(stack, dtype=complex)
    a, b, c, d = stack[:, 0, 0], stack[:, 0, 1], stack[:, 1, 0], stack[:, 1, 1]
    scale = np.maximum(1.0, np.abs(stack).reshape(len(stack), 4).max(axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        tr = a + d
        det = a * d - b * c
        root = np.sqrt(tr * tr - 4 * det)
        root = np.where(np.abs(tr - root) > np.abs(tr + root), -root, root)
        lam1 = (tr + root) / 2
        nonzero = lam1 != 0
        lam2 = np.where(nonzero, det / np.where(nonzero, lam1, 1), (tr - root) / 2)

        f1, s1, found1 = _weights(a, b, c, d, lam1, scale)
        f2, s2, found2 = _weights(a, b, c, d, lam2, scale)
        scalar = ~found1 & ~found2
        shared = ~found2 | (np.abs(lam1 - lam2) <= 1e-9 * scale)
        f1, s1 = np.where(found1, f1, f2), np.where(found1, s1, s2)
        f2, s2 = np.where(shared, f1, f2), np.where(shared, s1, s2)
        # scalar matrices: take the standard basis
        f1, s1 = np.where(scalar, 1.0, f1), np.where(scalar, 0.0, s1)
        f2, s2 = np.where(scalar, 0.0, f2), np.where(scalar, 1.0, s2)

        swap = _leads(lam1, lam2)
        leading = np.abs(np.where(swap, lam2, lam1))
        other = np.abs(np.where(swap, lam1, lam2))
        first = np.where(swap, f2, f1)
        second = np.where(swap, s2, s1)

        power = 2 if normalization == "squared" else 1
        w_leading = leading ** power
        total = w_leading + other ** power
        p_leading = np.clip(w_leading / np.where(total > 0, total, 1.0), 0.0, 1.0)
        p1 = np.where(first < second - TIE_TOLERANCE, 1.0 - p_leading, p_leading)
    degenerate = ((leading < DEGENERATE) & (other < DEGENERATE)) | (total < DEGENERATE)
    return np.where(degenerate, 0.5, p1)


def action_probabilities(matrix, normalization="squared"):
    """Probabilities (p1, p2) of actions a1 and a2 for a resolved matrix.

    `normalization` is "squared" (p_i = |l_i|^2 / sum) or "linear"
    (p_i = |l_i| / sum). Matrices whose eigenvalues both vanish give
    (0.5, 0.5).
    """
    p1 = float(stack_probabilities(matrix.as_array()[np.newaxis], normalization)[0])
    return p1, 1.0 - p1


def sample_action(p1, rng):
    """Action 1 with probability `p1`, else action 2."""
    return 1 if rng.random() < p1 else 2


def strategy(tree, choices, normalization="squared"):
    matrix = resolve(tree, choices)
    p1, p2 = action_probabilities(matrix, normalization)
    return Strategy(tuple(choices), matrix, p1, p2)


_GATE_ARRAYS = {name: matrix.as_array()[np.newaxis] for name, matrix in _GATES.items()}


def resolve_stack(tree):
    """The matrix of every strategy of `tree` as a (2**c, 2, 2) array.

    Row i holds the strategy whose choice bits, read most significant
    first, spell i; the same order `enumerate_strategies` uses. Each
    subtree is resolved once and combined by broadcasting.
    """
    if isinstance(tree, Leaf):
        return _GATE_ARRAYS[tree.gate]
    left = resolve_stack(tree.left)
    right = resolve_stack(tree.right)
    if isinstance(tree, Add):
        combined = left[:, np.newaxis] + right[np.newaxis, :]
    elif isinstance(tree, Mul):
        combined = np.matmul(left[:, np.newaxis], right[np.newaxis, :])
    else:
        # the choice bit leads, so the left branch fills the first half
        shape = (len(left), len(right), 2, 2)
        combined = np.concatenate((np.broadcast_to(left[:, np.newaxis], shape),
                                   np.broadcast_to(right[np.newaxis, :], shape)))
    return combined.reshape(-1, 2, 2)


def strategy_probabilities(tree, cap=DEFAULT_ENUMERATION_CAP, normalization="squared"):
    """p1 of every strategy of `tree`, in `enumerate_strategies` order."""
    count = count_choices(tree)
    if count > cap:
        raise EnumerationCapError(count, cap)
    return stack_probabilities(resolve_stack(tree), normalization)


def enumerate_strategies(tree, cap=DEFAULT_ENUMERATION_CAP, normalization="squared"):
    """Every strategy of `tree`, one per choice vector, in binary order."""
    count = count_choices(tree)
    if count > cap:
        raise EnumerationCapError(count, cap)
    stack = resolve_stack(tree)
    p1s = stack_probabilities(stack, normalization)
    return [
        Strategy(bits, CMatrix2.from_rows(matrix), float(p1), 1.0 - float(p1))
        for bits, matrix, p1 in zip(itertools.product((0, 1), repeat=count), stack, p1s)
    ]


def sample_strategy(tree, rng, normalization="squared"):
    """A strategy from uniformly random choice bits."""
    bits = tuple(int(bit) for bit in rng.integers(0, 2, size=count_choices(tree)))
    return strategy(tree, bits, normalization)


def chosen_branches(tree, choices):
    """Infix text of the branch each choice node selects, in depth-first order."""
    nodes = [node for _, node in trees.walk(tree) if isinstance(node, Choice)]
    return tuple(to_infix(node.right if bit else node.left)
                 for node, bit in zip(nodes, choices))


def strategy_table(tree, cap=DEFAULT_ENUMERATION_CAP, normalization="squared"):
    """Rows of (choices, chosen branches, p1, p2) for reporting."""
    return [
        (item.choices, chosen_branches(tree, item.choices), item.p1, item.p2)
        for item in enumerate_strategies(tree, cap, normalization)
    ]


# ---- Genetic operators -----

@dataclass(frozen=True)
class GateGrammar(object):
    """Operators, gate leaves and depth bounds for growing gate trees."""
    operators: tuple = OPERATORS
    gates: tuple = GATE_NAMES
    init_depth: tuple = (2, 6)
    max_depth: int = 8

    def __post_init__(self):
        if not self.gates or any(name not in GATE_NAMES for name in self.gates):
            raise ConfigError("bad gate set {}".format(self.gates))
        if not self.operators or any(op not in OPERATORS for op in self.operators):
            raise ConfigError("bad gate operators {}".format(self.operators))
        low, high = self.init_depth
        if not 1 <= low <= high <= self.max_depth:
            raise ConfigError(
                "need 1 <= init depth {}..{} <= max depth {}".format(low, high, self.max_depth)
            )


def _random_leaf(grammar, rng):
    return Leaf(grammar.gates[rng.integers(len(grammar.gates))])


def _grow(grammar, rng, depth_left, full):
    if depth_left <= 1:
        return _random_leaf(grammar, rng)
    if not full:
        primitives = len(grammar.operators) + len(grammar.gates)
        if rng.integers(primitives) >= len(grammar.operators):
            return _random_leaf(grammar, rng)
    return _random_node(grammar, rng, depth_left, full)


def _random_node(grammar, rng, depth_left, full):
    node = _NODE_FOR_OP[grammar.operators[rng.integers(len(grammar.operators))]]
    left = _grow(grammar, rng, depth_left - 1, full)
    right = _grow(grammar, rng, depth_left - 1, full)
    return node(left, right)


def random_gate_tree(grammar, rng, max_depth=None):
    """Ramped half-and-half initialization over gate trees."""
    low, high = grammar.init_depth
    if max_depth is not None:
        high = min(high, max_depth)
        low = min(low, high)
    tree_depth = int(rng.integers(low, high + 1))
    if tree_depth <= 1:
        return _random_leaf(grammar, rng)
    return _random_node(grammar, rng, tree_depth, bool(rng.integers(2)))


def crossover(first, second, rng, max_depth=8):
    return trees.swap_subtrees(first, second, rng, max_depth)


def mutate(tree, grammar, rng):
    def fresh(path, limit):
        if not path:
            return random_gate_tree(grammar, rng)
        return random_gate_tree(grammar, rng, max_depth=max(1, limit))
    return trees.mutate_subtree(tree, rng, grammar.max_depth, fresh)


# ---- Text -----

def gate_tree_text(tree):
    """Prefix form, e.g. `(+ S (* (* (// I X) (* (// D Z) T)) T))`."""
    if isinstance(tree, Leaf):
        return tree.gate
    return "({} {} {})".format(tree.op, gate_tree_text(tree.left), gate_tree_text(tree.right))


def parse_gate_tree(text):
    """Inverse of `gate_tree_text`."""
    return _build(sexp.read(text))


def _build(form):
    if isinstance(form, sexp.Symbol):
        if form.name not in GATE_NAMES:
            raise ParseError("unknown gate {!r}".format(form.name), form.position, "gate name")
        return Leaf(form.name)
    if not form.items or not isinstance(form.items[0], sexp.Symbol):
        raise ParseError("missing operator", form.position + 1, "operator")
    head, args = form.items[0], form.items[1:]
    if head.name not in _NODE_FOR_OP:
        raise ParseError("unknown operator {!r}".format(head.name), head.position, "+, * or //")
    if len(args) != 2:
        raise ParseError(
            "{!r} takes 2 operands, got {}".format(head.name, len(args)),
            form.position, "2 operands",
        )
    return _NODE_FOR_OP[head.name](_build(args[0]), _build(args[1]))


def to_infix(tree):
    """Infix form, e.g. `S + ((I // X) * ((D // Z) * T)) * T`."""
    if isinstance(tree, Leaf):
        return tree.gate
    left = _infix_operand(tree, tree.left)
    right = _infix_operand(tree, tree.right)
    return "{} {} {}".format(left, tree.op, right)


def _infix_operand(parent, child):
    text = to_infix(child)
    if isinstance(child, Leaf):
        return text
    if isinstance(parent, Add) and not isinstance(child, Choice):
        return text
    return "({})".format(text)
