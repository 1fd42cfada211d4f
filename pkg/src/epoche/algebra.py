"""Truncated bracketing algebra and its classical shadow.

Both algebras share one basis: monomials, i.e. tuples of positive trees in
non-increasing order.  A :class:`ShadowElement` multiplies q-commutatively,
an :class:`EnvelopeElement` multiplies through normal ordering with the
relation ``h[x] h[y] = q_{y,x} h[y] h[x] + h[[x,y]]`` for ``x < y``.

Coefficients are :class:`~epoche.polynomials.RationalFunction` values in
symbolic mode and :class:`fractions.Fraction` values when the context carries
a specialization of the q-variables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .coeffs import q_pair
from .polynomials import ONE, LaurentPolynomial, RationalFunction, Specialization
from .trees import LTree, TreeError, format_tree, is_leaf, is_positive, precedes, rank, size, tree_key, word

Monomial = Tuple[LTree, ...]
Coeff = Union[RationalFunction, Fraction]

UNIT: Monomial = ()


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    """Alphabet ``[2d]``, truncation level ``N`` and coefficient mode."""

    d: int = 1
    N: int = 3
    spec: Optional[Specialization] = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def symbolic(self) -> bool:
        return self.spec is None

    @property
    def mode(self) -> str:
        return "symbolic" if self.spec is None else "specialized"

    def with_spec(self, spec: Optional[Specialization]) -> "Context":
        return Context(self.d, self.N, spec)

    def with_N(self, N: int) -> "Context":
        return Context(self.d, N, self.spec)

    # coefficients

    @property
    def zero(self) -> Coeff:
        return RationalFunction(0) if self.spec is None else Fraction(0)

    @property
    def one(self) -> Coeff:
        return RationalFunction(1) if self.spec is None else Fraction(1)

    def coeff(self, x) -> Coeff:
        if self.spec is None:
            if isinstance(x, RationalFunction):
                return x
            if isinstance(x, (int, Fraction, LaurentPolynomial)):
                return RationalFunction(x)
        else:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            if isinstance(x, (LaurentPolynomial, RationalFunction)):
                return x.evaluate(self.spec)
        raise TypeError(f"cannot use {x!r} as a coefficient")

    def qc(self, a: LTree, b: LTree) -> Coeff:
        """``q_pair(a, b)`` as a coefficient of this context."""
        cache = self._cache.setdefault("qc", {})
        key = (a, b)
        c = cache.get(key)
        if c is None:
            c = cache[key] = self.coeff(q_pair(a, b))
        return c

    def memo(self, name: str) -> dict:
        return self._cache.setdefault(name, {})

    def check_tree(self, t: LTree) -> None:
        for x in word(t):
            if not 1 <= x <= 2 * self.d:
                raise TreeError(f"label {x} out of range [1, {2 * self.d}] in {format_tree(t)}")


# -- monomials ----------------------------------------------------------------------


def degree_of_tree(t: LTree) -> int:
    return size(t) - 1


def monomial_degree(m: Monomial) -> int:
    return sum(size(t) for t in m) - len(m)


def is_monomial(m: Sequence[LTree], ctx: Optional[Context] = None) -> bool:
    if any(not is_positive(t) for t in m):
        return False
    if ctx is not None and any(size(t) > ctx.N for t in m):
        return False
    return all(not precedes(m[i], m[i + 1]) for i in range(len(m) - 1))


def monomial_sort_key(m: Monomial, d: int) -> tuple:
    return (tuple(rank(t, d) for t in m), len(m))


@lru_cache(maxsize=None)
def shadow_sort(word_: Tuple[LTree, ...]) -> Tuple[LaurentPolynomial, Monomial]:
    """Sort a word of trees into non-increasing order in the q-commutative shadow.

    Returns ``(c, m)`` with ``h[word] = c * h[m]``.  Each pair ``a`` left of
    ``b`` with ``a < b`` contributes ``q_pair(b, a)``.
    """
    c = ONE
    n = len(word_)
    for i in range(n):
        for j in range(i + 1, n):
            if precedes(word_[i], word_[j]):
                c = c * q_pair(word_[j], word_[i])
    m = tuple(sorted(word_, key=tree_key, reverse=True))
    return c, m


@lru_cache(maxsize=None)
def shadow_monomial_product(a: Monomial, b: Monomial) -> Tuple[LaurentPolynomial, Monomial]:
    return shadow_sort(a + b)


@lru_cache(maxsize=None)
def swap_coeff(a: Monomial, b: Monomial) -> LaurentPolynomial:
    """The monomial ``c`` with ``b * a = c * a * b`` in the shadow."""
    out = ONE
    for x in a:
        for y in b:
            out = out * q_pair(x, y)
    return out


# -- canonical trees --------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalTree:
    """``h[g] = coeff * h[tree]``; ``tree`` is None when ``h[g]`` vanishes."""

    coeff: LaurentPolynomial
    tree: Optional[LTree]

    @property
    def is_zero(self) -> bool:
        return self.tree is None


_ZERO_TREE = CanonicalTree(LaurentPolynomial.const(0), None)


def canonicalize_tree(g: LTree, ctx: Context) -> CanonicalTree:
    ctx.check_tree(g)
    memo = ctx.memo("canon")
    hit = memo.get(g)
    if hit is None:
        hit = memo[g] = _canonicalize(g, ctx.N)
    return hit


def _canonicalize(g: LTree, N: int) -> CanonicalTree:
    if size(g) > N:
        return _ZERO_TREE
    if is_leaf(g):
        return CanonicalTree(ONE, g)
    left, right = _canonicalize(g[0], N), _canonicalize(g[1], N)
    if left.is_zero or right.is_zero or left.tree == right.tree:
        return _ZERO_TREE
    c = left.coeff * right.coeff
    if precedes(left.tree, right.tree):
        return CanonicalTree(c, (left.tree, right.tree))
    # h[[L,R]] = -q_{R,L} h[[R,L]]
    return CanonicalTree(-c * q_pair(right.tree, left.tree), (right.tree, left.tree))


# -- elements ------------------------------------------------------------------------


class _Element:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Optional[Dict[Monomial, Coeff]] = None):
        self.ctx = ctx
        self.terms: Dict[Monomial, Coeff] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def _wrap(cls, ctx: Context, terms: Dict[Monomial, Coeff]):
        e = object.__new__(cls)
        e.ctx = ctx
        e.terms = terms
        return e

    @classmethod
    def zero(cls, ctx: Context):
        return cls._wrap(ctx, {})

    @classmethod
    def unit(cls, ctx: Context):
        return cls._wrap(ctx, {UNIT: ctx.one})

    @classmethod
    def basis(cls, ctx: Context, m: Sequence[LTree], coeff=1):
        m = tuple(m)
        for t in m:
            ctx.check_tree(t)
        if not is_monomial(m, ctx):
            raise ValueError(f"not a basis monomial: {[format_tree(t) for t in m]}")
        c = ctx.coeff(coeff)
        return cls._wrap(ctx, {m: c} if c else {})

    @classmethod
    def generator(cls, ctx: Context, t: LTree):
        """``h[t]`` with ``t`` canonicalised (possibly zero)."""
        ct = canonicalize_tree(t, ctx)
        if ct.is_zero:
            return cls.zero(ctx)
        return cls._wrap(ctx, {(ct.tree,): ctx.coeff(ct.coeff)})

    # container protocol

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> List[Tuple[Monomial, Coeff]]:
        """Terms in deterministic order (ranks of the factors, then length)."""
        d = self.ctx.d
        return sorted(self.terms.items(), key=lambda kv: monomial_sort_key(kv[0], d))

    def __iter__(self) -> Iterator[Tuple[Monomial, Coeff]]:
        return iter(self.items())

    def coefficient(self, m: Sequence[LTree]) -> Coeff:
        return self.terms.get(tuple(m), self.ctx.zero)

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise ContextMismatch(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"context mismatch: {self.ctx} vs {other.ctx}")

    # linear structure

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms)
        return self._wrap(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Element":
        c = self.ctx.coeff(c)
        if not c:
            return self._wrap(self.ctx, {})
        return self._wrap(self.ctx, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if not isinstance(other, _Element):
            return NotImplemented
        if type(other) is not type(self) or other.ctx != self.ctx:
            return False
        return not (self - other).terms

    __hash__ = None

    # grading

    def degrees(self) -> List[int]:
        return sorted({monomial_degree(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def graded_component(self, k: int):
        if k < 0:
            raise ValueError("degree must be nonnegative")
        return self._wrap(self.ctx, {m: c for m, c in self.terms.items() if monomial_degree(m) == k})

    def filtration_part(self, k: int):
        """Terms of degree ``>= k``."""
        return self._wrap(self.ctx, {m: c for m, c in self.terms.items() if monomial_degree(m) >= k})

    def homogeneous_parts(self) -> Dict[int, "_Element"]:
        return {k: self.graded_component(k) for k in self.degrees()}

    def evaluate(self, spec: Specialization):
        """Specialise a symbolic element."""
        ctx = self.ctx.with_spec(spec)
        return self._wrap(ctx, {m: c for m, c in
                                ((m, ctx.coeff(c)) for m, c in self.terms.items()) if c})

    def __repr__(self) -> str:
        from .textio import format_element
        return f"{type(self).__name__}({format_element(self)!r})"

    def __str__(self) -> str:
        from .textio import format_element
        return format_element(self)


def _accumulate(out: Dict[Monomial, Coeff], terms: Dict[Monomial, Coeff], scale=None) -> None:
    for m, c in terms.items():
        if scale is not None:
            c = c * scale
        v = out.get(m)
        if v is None:
            if c:
                out[m] = c
        else:
            v = v + c
            if v:
                out[m] = v
            else:
                del out[m]


class ShadowElement(_Element):
    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial, RationalFunction)):
            return self.scale(other)
        return shadow_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)


class EnvelopeElement(_Element):
    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial, RationalFunction)):
            return self.scale(other)
        return envelope_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)


def reinterpret(x: _Element, cls):
    """Same coefficients on the same basis, viewed in the other algebra."""
    return cls._wrap(x.ctx, dict(x.terms))


# -- shadow product ---------------------------------------------------------------


def shadow_mul(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    a._check(b)
    ctx = a.ctx
    out: Dict[Monomial, Coeff] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c, m = shadow_monomial_product(ma, mb)
            _accumulate(out, {m: ca * cb * ctx.coeff(c)})
    return ShadowElement._wrap(ctx, out)


def shadow_word(ctx: Context, trees: Sequence[LTree], coeff=1) -> ShadowElement:
    """``coeff * h[t1] ... h[tk]`` in the shadow, factors canonicalised."""
    c = ctx.coeff(coeff)
    good = []
    for t in trees:
        ct = canonicalize_tree(t, ctx)
        if ct.is_zero:
            return ShadowElement.zero(ctx)
        c = c * ctx.coeff(ct.coeff)
        good.append(ct.tree)
    q, m = shadow_sort(tuple(good))
    c = c * ctx.coeff(q)
    return ShadowElement._wrap(ctx, {m: c} if c else {})


# -- normal ordering -----------------------------------------------------------------


def _times_tree(ctx: Context, m: Monomial, x: LTree) -> Dict[Monomial, Coeff]:
    """Normal form of ``h[m] h[x]`` for a basis monomial ``m`` and positive ``x``."""
    memo = ctx.memo("times_tree")
    key = (m, x)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not m or not precedes(m[-1], x):
        out = {m + (x,): ctx.one}
    else:
        last, head = m[-1], m[:-1]
        # h[head] h[last] h[x] = q_{x,last} h[head] h[x] h[last] + h[head] h[[last,x]]
        out: Dict[Monomial, Coeff] = {}
        swap = ctx.qc(x, last)
        for mm, cc in _times_tree(ctx, head, x).items():
            _accumulate(out, _times_tree(ctx, mm, last), cc * swap)
        joined = (last, x)
        if size(joined) <= ctx.N:
            _accumulate(out, _times_tree(ctx, head, joined))
    memo[key] = out
    return out


def _times_monomial(ctx: Context, a: Monomial, b: Monomial) -> Dict[Monomial, Coeff]:
    memo = ctx.memo("times_monomial")
    key = (a, b)
    hit = memo.get(key)
    if hit is not None:
        return hit
    cur: Dict[Monomial, Coeff] = {a: ctx.one}
    for x in b:
        nxt: Dict[Monomial, Coeff] = {}
        for m, c in cur.items():
            _accumulate(nxt, _times_tree(ctx, m, x), c)
        cur = nxt
    memo[key] = cur
    return cur


def envelope_mul(a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
    a._check(b)
    ctx = a.ctx
    out: Dict[Monomial, Coeff] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            _accumulate(out, _times_monomial(ctx, ma, mb), ca * cb)
    return EnvelopeElement._wrap(ctx, out)


def _canonical_word(ctx: Context, trees: Sequence[LTree], coeff) -> Tuple[Coeff, Optional[Tuple[LTree, ...]]]:
    c = ctx.coeff(coeff)
    good = []
    for t in trees:
        ct = canonicalize_tree(t, ctx)
        if ct.is_zero:
            return ctx.zero, None
        c = c * ctx.coeff(ct.coeff)
        good.append(ct.tree)
    return c, tuple(good)


@dataclass
class RewriteStats:
    """Bookkeeping of one rewriting run."""

    strategy: str
    rewrites: int = 0
    max_chain: int = 0
    chain_bound: int = 0


def chain_bound(length: int) -> int:
    """Longest possible chain of rewrites starting from a word of ``length`` factors.

    A rewrite either swaps an ascending adjacent pair (same length, one
    ascending pair fewer) or merges it (length drops by one), so along any
    chain the pair (length, ascending pairs) decreases lexicographically.
    """
    return sum(k * (k - 1) // 2 + 1 for k in range(1, length + 1))


def _ascending_pairs(w: Tuple[LTree, ...]) -> int:
    keys = [tree_key(t) for t in w]
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if keys[i] < keys[j])


def normal_order(trees: Sequence[LTree], coeff, ctx: Context, strategy: Optional[str] = None,
                 rng: Optional[random.Random] = None, stats: Optional[RewriteStats] = None) -> EnvelopeElement:
    """Express ``coeff * h[t1] ... h[tk]`` in the basis of the bracketing algebra.

    Without ``strategy`` the memoised insertion procedure is used.  With
    ``strategy`` in ``{"leftmost", "rightmost", "random"}`` an explicit
    rewriter picks the ascending adjacent pair to rewrite at every step and
    checks the termination measure as it goes.
    """
    c, w = _canonical_word(ctx, trees, coeff)
    if w is None or not c:
        return EnvelopeElement.zero(ctx)
    if strategy is None:
        out: Dict[Monomial, Coeff] = {UNIT: c}
        for x in w:
            nxt: Dict[Monomial, Coeff] = {}
            for m, cc in out.items():
                _accumulate(nxt, _times_tree(ctx, m, x), cc)
            out = nxt
        return EnvelopeElement._wrap(ctx, out)
    return _rewrite(ctx, w, c, strategy, rng or random.Random(0), stats)


def _rewrite(ctx: Context, w: Tuple[LTree, ...], c: Coeff, strategy: str, rng: random.Random,
             stats: Optional[RewriteStats]) -> EnvelopeElement:
    if strategy not in ("leftmost", "rightmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if stats is None:
        stats = RewriteStats(strategy)
    stats.chain_bound = max(stats.chain_bound, chain_bound(len(w)))
    # pending: word -> [coefficient, chain depth]
    pending: Dict[Tuple[LTree, ...], list] = {w: [c, 0]}
    result: Dict[Monomial, Coeff] = {}

    def measure(x):
        return (len(x), _ascending_pairs(x))

    def push(x, coeff, depth):
        entry = pending.get(x)
        if entry is None:
            pending[x] = [coeff, depth]
        else:
            entry[0] = entry[0] + coeff
            entry[1] = max(entry[1], depth)

    while pending:
        cur = max(pending, key=measure)
        coeff, depth = pending.pop(cur)
        if not coeff:
            continue
        stats.max_chain = max(stats.max_chain, depth)
        if depth > stats.chain_bound:
            raise AssertionError(f"rewrite chain of length {depth} exceeds bound {stats.chain_bound}")
        spots = [i for i in range(len(cur) - 1) if precedes(cur[i], cur[i + 1])]
        if not spots:
            _accumulate(result, {cur: coeff})
            continue
        if strategy == "leftmost":
            i = spots[0]
        elif strategy == "rightmost":
            i = spots[-1]
        else:
            i = rng.choice(spots)
        x, y = cur[i], cur[i + 1]
        before = measure(cur)
        swapped = cur[:i] + (y, x) + cur[i + 2:]
        assert measure(swapped) < before
        stats.rewrites += 1
        push(swapped, coeff * ctx.qc(y, x), depth + 1)
        joined = (x, y)
        if size(joined) <= ctx.N:
            merged = cur[:i] + (joined,) + cur[i + 2:]
            assert measure(merged) < before
            push(merged, coeff, depth + 1)
    return EnvelopeElement._wrap(ctx, result)


def envelope_word(ctx: Context, trees: Sequence[LTree], coeff=1) -> EnvelopeElement:
    return normal_order(trees, coeff, ctx)


def generators(ctx: Context) -> Tuple[LTree, ...]:
    from .trees import enumerate_positive
    return enumerate_positive(ctx.d, ctx.N)
