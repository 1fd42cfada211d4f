"""Planar binary trees and leaf-labelled trees.

A shape is either the leaf symbol ``"*"`` or a pair ``(left, right)`` of
shapes.  A labelled tree is either a positive integer (a single labelled
leaf) or a pair ``(left, right)`` of labelled trees.  Both are plain
immutable Python values, so they hash structurally and can be used as
dictionary keys directly.

Text form of a labelled tree is the nested bracket notation::

    tree  := label | '[' tree ',' tree ']'
    label := [1-9][0-9]*
"""

from __future__ import annotations

import enum
import itertools
import re
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence, Tuple, Union

Shape = Union[str, Tuple["Shape", "Shape"]]
LTree = Union[int, Tuple["LTree", "LTree"]]

LEAF: Shape = "*"


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class TreeError(ValueError):
    pass


def is_leaf(t) -> bool:
    return not isinstance(t, tuple)


def node(left, right):
    return (left, right)


@lru_cache(maxsize=None)
def size(t) -> int:
    """Number of leaves."""
    if is_leaf(t):
        return 1
    return size(t[0]) + size(t[1])


def degree(t: LTree) -> int:
    return size(t) - 1


@lru_cache(maxsize=None)
def shape_of(t: LTree) -> Shape:
    if is_leaf(t):
        return LEAF
    return (shape_of(t[0]), shape_of(t[1]))


@lru_cache(maxsize=None)
def word(t: LTree) -> Tuple[int, ...]:
    """Leaf labels read left to right."""
    if is_leaf(t):
        return (t,)
    return word(t[0]) + word(t[1])


def label(shape: Shape, labels: Sequence[int]) -> LTree:
    """Attach ``labels`` to the leaves of ``shape`` from left to right."""
    if len(labels) != size(shape):
        raise TreeError(f"shape has {size(shape)} leaves, got {len(labels)} labels")
    it = iter(labels)

    def build(s):
        if s == LEAF:
            return next(it)
        return (build(s[0]), build(s[1]))

    return build(shape)


# -- ordering -----------------------------------------------------------------


@lru_cache(maxsize=None)
def shape_key(s) -> tuple:
    """Sort key realising the recursive total order on shapes.

    Fewer leaves come first; equal leaf counts compare the left branches,
    then the right branches.  Works on labelled trees too (labels ignored).
    """
    if is_leaf(s):
        return (1,)
    return (size(s), shape_key(s[0]), shape_key(s[1]))


@lru_cache(maxsize=None)
def tree_key(t: LTree) -> tuple:
    """Sort key for labelled trees: shape first, then the label word."""
    return (shape_key(t), word(t))


def _cmp(a, b) -> Ordering:
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def compare_shapes(a: Shape, b: Shape) -> Ordering:
    return _cmp(shape_key(a), shape_key(b))


def compare_ltrees(a: LTree, b: LTree) -> Ordering:
    return _cmp(tree_key(a), tree_key(b))


def precedes(a: LTree, b: LTree) -> bool:
    """Strict ``a < b`` in the labelled-tree order."""
    return tree_key(a) < tree_key(b)


@lru_cache(maxsize=None)
def is_positive(t: LTree) -> bool:
    """Membership in the independent generator set.

    Leaves are positive; a node is positive when both branches are and the
    left branch strictly precedes the right one.
    """
    if is_leaf(t):
        return True
    left, right = t
    return is_positive(left) and is_positive(right) and precedes(left, right)


# -- construction ---------------------------------------------------------------


def concat(a: LTree, b: LTree) -> LTree:
    return (a, b)


def compose(t: Shape, perm: Sequence[int], args: Sequence[LTree]) -> LTree:
    """Graft ``args[perm[i]]`` onto the ``i``-th leaf of ``t``.

    ``perm`` holds 0-based images.  With the identity permutation and the
    two-leaf shape this is :func:`concat`.
    """
    n = size(t)
    if len(args) != n or len(perm) != n:
        raise TreeError(f"arity mismatch: shape has {n} leaves, "
                        f"got {len(args)} args and permutation of size {len(perm)}")
    if sorted(perm) != list(range(n)):
        raise TreeError(f"not a permutation: {tuple(perm)}")
    counter = itertools.count()

    def build(s):
        if s == LEAF:
            return args[perm[next(counter)]]
        return (build(s[0]), build(s[1]))

    return build(t)


# -- counting, ranking ----------------------------------------------------------


@lru_cache(maxsize=None)
def catalan(m: int) -> int:
    if m < 0:
        raise ValueError("catalan index must be nonnegative")
    return comb(2 * m, m) // (m + 1)


def shape_count(n: int) -> int:
    """Number of shapes with ``n`` leaves (zero for ``n = 0``)."""
    return catalan(n - 1) if n >= 1 else 0


@lru_cache(maxsize=None)
def shapes(n: int) -> Tuple[Shape, ...]:
    """All shapes with ``n`` leaves, in increasing order."""
    if n < 1:
        return ()
    if n == 1:
        return (LEAF,)
    out = []
    for p in range(1, n):
        for left in shapes(p):
            for right in shapes(n - p):
                out.append((left, right))
    return tuple(out)


@lru_cache(maxsize=None)
def shape_rank(s: Shape) -> int:
    """0-based position of ``s`` among shapes with the same leaf count."""
    if s == LEAF:
        return 0
    n = size(s)
    p = size(s[0])
    before = sum(shape_count(k) * shape_count(n - k) for k in range(1, p))
    return before + shape_rank(s[0]) * shape_count(n - p) + shape_rank(s[1])


def shape_unrank(n: int, k: int) -> Shape:
    if not 0 <= k < shape_count(n):
        raise ValueError(f"shape rank {k} out of range for {n} leaves")
    if n == 1:
        return LEAF
    for p in range(1, n):
        block = shape_count(p) * shape_count(n - p)
        if k < block:
            per_left = shape_count(n - p)
            return (shape_unrank(p, k // per_left), shape_unrank(n - p, k % per_left))
        k -= block
    raise AssertionError("unreachable")


def _level_count(n: int, d: int) -> int:
    return shape_count(n) * (2 * d) ** n


def rank(t: LTree, d: int) -> int:
    """Position (1-based) of ``t`` in the ordered set of trees over ``[2d]``."""
    w = word(t)
    base = 2 * d
    if any(not 1 <= x <= base for x in w):
        raise TreeError(f"label out of range [1, {base}] in {format_tree(t)}")
    n = len(w)
    r = sum(_level_count(m, d) for m in range(1, n))
    r += shape_rank(shape_of(t)) * base ** n
    word_rank = 0
    for x in w:
        word_rank = word_rank * base + (x - 1)
    return r + word_rank + 1


def unrank(k: int, d: int) -> LTree:
    if k < 1:
        raise ValueError("rank must be >= 1")
    base = 2 * d
    k -= 1
    n = 1
    while k >= _level_count(n, d):
        k -= _level_count(n, d)
        n += 1
    s_rank, w_rank = divmod(k, base ** n)
    labels = []
    for _ in range(n):
        w_rank, digit = divmod(w_rank, base)
        labels.append(digit + 1)
    return label(shape_unrank(n, s_rank), labels[::-1])


# -- enumeration ---------------------------------------------------------------


def ltrees(d: int, n: int) -> Iterator[LTree]:
    """All labelled trees with ``n`` leaves over ``[2d]``, in increasing order."""
    alphabet = range(1, 2 * d + 1)
    for s in shapes(n):
        for w in itertools.product(alphabet, repeat=n):
            yield label(s, w)


@lru_cache(maxsize=None)
def enumerate_positive(d: int, N: int) -> Tuple[LTree, ...]:
    if N < 1:
        raise ValueError("N must be >= 1")
    by_size = {1: list(range(1, 2 * d + 1))}
    for n in range(2, N + 1):
        by_size[n] = [
            (left, right)
            for p in range(1, n)
            for left in by_size[p]
            for right in by_size[n - p]
            if precedes(left, right)
        ]
    return tuple(sorted((t for ts in by_size.values() for t in ts), key=tree_key))


# -- text ------------------------------------------------------------------------


def format_tree(t: LTree) -> str:
    if is_leaf(t):
        return str(t)
    return f"[{format_tree(t[0])},{format_tree(t[1])}]"


def format_shape(s: Shape) -> str:
    if s == LEAF:
        return "*"
    return f"({format_shape(s[0])},{format_shape(s[1])})"


_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(,)|([1-9][0-9]*))")


class TreeSyntaxError(TreeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def parse_tree_prefix(text: str, pos: int = 0) -> Tuple[LTree, int]:
    """Parse one tree starting at ``pos``; return it and the end offset."""

    def expect(p: int):
        m = _TOKEN.match(text, p)
        if not m:
            raise TreeSyntaxError("unexpected input", p)
        return m

    def parse(p: int):
        m = expect(p)
        if m.group(4):
            return int(m.group(4)), m.end()
        if not m.group(1):
            raise TreeSyntaxError("expected label or '['", m.start(m.lastindex))
        left, p = parse(m.end())
        m = expect(p)
        if not m.group(3):
            raise TreeSyntaxError("expected ','", m.start(m.lastindex))
        right, p = parse(m.end())
        m = expect(p)
        if not m.group(2):
            raise TreeSyntaxError("expected ']'", m.start(m.lastindex))
        return (left, right), m.end()

    return parse(pos)


def parse_tree(text: str) -> LTree:
    t, end = parse_tree_prefix(text)
    if text[end:].strip():
        raise TreeSyntaxError("trailing input", end)
    return t


def parse_shape(text: str) -> Shape:
    """Parse ``*`` / ``(S,S)`` shape notation."""
    src = text.replace(" ", "")
    pos = 0

    def parse():
        nonlocal pos
        if src.startswith("*", pos):
            pos += 1
            return LEAF
        if not src.startswith("(", pos):
            raise TreeSyntaxError("expected '*' or '('", pos)
        pos += 1
        left = parse()
        if not src.startswith(",", pos):
            raise TreeSyntaxError("expected ','", pos)
        pos += 1
        right = parse()
        if not src.startswith(")", pos):
            raise TreeSyntaxError("expected ')'", pos)
        pos += 1
        return (left, right)

    s = parse()
    if pos != len(src):
        raise TreeSyntaxError("trailing input", pos)
    return s


def to_dot(t: LTree) -> str:
    """Graphviz DOT rendering of a labelled tree."""
    lines = ["digraph tree {", "  node [shape=circle];"]
    counter = itertools.count()

    def walk(x) -> str:
        name = f"n{next(counter)}"
        if is_leaf(x):
            lines.append(f'  {name} [label="{x}", shape=box];')
        else:
            lines.append(f'  {name} [label=""];')
            for child in x:
                lines.append(f"  {name} -> {walk(child)};")
        return name

    walk(t)
    lines.append("}")
    return "\n".join(lines)
