"""Structural operations shared by expression trees and gate trees.

Nodes are immutable and expose `children` (a tuple) and `rebuild(children)`
returning a copy with new children. Paths are tuples of child indexes from
the root.
"""


def walk(tree, path=()):
    """Yield (path, node) in depth-first pre-order, left to right."""
    yield path, tree
    for index, child in enumerate(tree.children):
        for item in walk(child, path + (index,)):
            yield item


def subtree(tree, path):
    """The node at `path`."""
    node = tree
    for index in path:
        node = node.children[index]
    return node


def replace(tree, path, new):
    """A copy of `tree` with the node at `path` replaced by `new`."""
    if not path:
        return new
    head, rest = path[0], path[1:]
    children = list(tree.children)
    children[head] = replace(children[head], rest, new)
    return tree.rebuild(tuple(children))


def depth(tree):
    """Depth counting nodes; a leaf has depth 1."""
    if not tree.children:
        return 1
    return 1 + max(depth(child) for child in tree.children)


def size(tree):
    """Number of nodes."""
    return 1 + sum(size(child) for child in tree.children)


def random_path(tree, rng):
    """A uniformly chosen node path."""
    paths = [path for path, _ in walk(tree)]
    return paths[rng.integers(len(paths))]


def swap_subtrees(first, second, rng, max_depth):
    """Subtree crossover.

    Swaps a uniformly chosen subtree of `first` with one of `second`. An
    offspring deeper than `max_depth` is replaced by its own parent.
    """
    path_a = random_path(first, rng)
    path_b = random_path(second, rng)
    part_a = subtree(first, path_a)
    part_b = subtree(second, path_b)
    child_a = replace(first, path_a, part_b)
    child_b = replace(second, path_b, part_a)
    if depth(child_a) > max_depth:
        child_a = first
    if depth(child_b) > max_depth:
        child_b = second
    return child_a, child_b


def mutate_subtree(tree, rng, max_depth, fresh):
    """Replace a uniformly chosen subtree with `fresh(path, depth_limit)`.

    `depth_limit` is the largest subtree depth that keeps the result within
    `max_depth`.
    """
    path = random_path(tree, rng)
    limit = max_depth - len(path)
    return replace(tree, path, fresh(path, limit))
