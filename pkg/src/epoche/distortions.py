"""Projector-modified products, tree-indexed brackets, twisted products and
the Yang-Baxter type residual of their left multiplication operators."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import coeffs
from .algebra import (Context, Monomial, ShadowElement, _accumulate, canonicalize_tree, is_monomial, shadow_mul,
                      shadow_word)
from .coeffs import label_pair
from .polynomials import ONE, LaurentPolynomial
from .quantize import bracket_weyl, star_normal, star_weyl
from .textio import element_from_json, element_to_json, format_element
from .trees import LEAF, LTree, Shape, concat, enumerate_positive, format_shape, format_tree, is_leaf, parse_tree, tree_key


# -- projectors -----------------------------------------------------------------------


def braiding_factor(i: Sequence[int], j: Sequence[int], s: coeffs.Permutation) -> LaurentPolynomial:
    """``b`` with ``xi_i1 xi_js(1) ... xi_im xi_js(m) = b * xi_i1 xi_j1 ... xi_im xi_jm``
    for symbols with ``xi_a xi_b = -q[b,a] xi_b xi_a``.

    Letters are tracked by position, so repeated labels are unambiguous.
    """
    m = len(i)
    base = []
    for k in range(m):
        base += [i[k], j[k]]
    # position in ``base`` of each letter of the permuted word
    pos = []
    for k in range(m):
        pos += [2 * k, 2 * s[k] + 1]
    out = ONE
    for p in range(2 * m):
        for r in range(p + 1, 2 * m):
            if pos[p] > pos[r]:
                a, b = base[pos[p]], base[pos[r]]
                out = out * label_pair((b,), (a,)) * -1
    return out


class ProjectorError(ValueError):
    pass


@dataclass
class ProjectorSpec:
    """A linear map on the truncated shadow, given on basis monomials.

    ``kind`` is ``"identity"``, ``"builtin"`` (the N=2 symmetrizer) or
    ``"table"`` (explicit images; monomials missing from the table are
    fixed).
    """

    ctx: Context
    kind: str = "identity"
    table: Dict[Monomial, ShadowElement] = field(default_factory=dict)

    def on_monomial(self, m: Monomial) -> ShadowElement:
        if self.kind == "builtin":
            return _builtin_image(self.ctx, m)
        hit = self.table.get(m)
        if hit is not None:
            return hit
        return ShadowElement.basis(self.ctx, m)

    def __call__(self, x: ShadowElement) -> ShadowElement:
        if self.kind == "identity":
            return x
        out: dict = {}
        for m, c in x.terms.items():
            _accumulate(out, self.on_monomial(m).terms, c)
        return ShadowElement._wrap(x.ctx, out)


def builtin_projector_N2(ctx: Context) -> ProjectorSpec:
    if ctx.N != 2:
        raise ProjectorError(f"the built-in symmetrizer needs N = 2, got N = {ctx.N}")
    return ProjectorSpec(ctx, "builtin")


def _builtin_image(ctx: Context, m: Monomial) -> ShadowElement:
    memo = ctx.memo("projector_n2")
    hit = memo.get(m)
    if hit is not None:
        return hit
    pairs = [t for t in m if not is_leaf(t)]
    singles = [t for t in m if is_leaf(t)]
    i = [t[0] for t in pairs]
    j = [t[1] for t in pairs]
    perms = list(coeffs.permutations(len(pairs)))
    bs = {s: braiding_factor(i, j, s) for s in perms}
    norm = ctx.coeff(sum((b * b for b in bs.values()), LaurentPolynomial.const(0)))
    out: dict = {}
    for s in perms:
        trees = [(i[k], j[s[k]]) for k in range(len(pairs))] + singles
        c = ctx.coeff(bs[s]) / norm
        _accumulate(out, shadow_word(ctx, trees, c).terms)
    hit = memo[m] = ShadowElement._wrap(ctx, out)
    return hit


def load_projector(ctx: Context, data: list) -> ProjectorSpec:
    """Projector from ``[{"key": [tree, ...], "value": element-JSON}, ...]``."""
    table: Dict[Monomial, ShadowElement] = {}
    for entry in data:
        key = tuple(parse_tree(t) for t in entry["key"])
        if not is_monomial(key, ctx):
            raise ProjectorError(f"key {entry['key']} is not a basis monomial")
        table[key] = element_from_json(entry["value"], ctx)
    return ProjectorSpec(ctx, "table", table)


def check_idempotent(p: ProjectorSpec, monomials: Sequence[Monomial]) -> List[Tuple[Monomial, ShadowElement, ShadowElement]]:
    """``(m, P(m), P(P(m)))`` for every ``m`` where ``P(P(m)) != P(m)``."""
    bad = []
    for m in monomials:
        once = p(ShadowElement.basis(p.ctx, m))
        twice = p(once)
        if once != twice:
            bad.append((m, once, twice))
    return bad


def projector_monomials(ctx: Context, max_pairs: int = 3, max_singles: int = 2) -> List[Monomial]:
    """Basis monomials with at most ``max_pairs`` degree-1 and ``max_singles`` degree-0 factors."""
    gens = enumerate_positive(ctx.d, ctx.N)
    pairs = sorted((g for g in gens if not is_leaf(g)), reverse=True, key=tree_key)
    singles = sorted((g for g in gens if is_leaf(g)), reverse=True)
    out = []
    for a in range(max_pairs + 1):
        for ps in itertools.combinations_with_replacement(pairs, a):
            for b in range(max_singles + 1):
                for ss in itertools.combinations_with_replacement(singles, b):
                    m = tuple(ps) + tuple(ss)
                    if is_monomial(m, ctx):
                        out.append(m)
    return out


# -- products built from a projector ----------------------------------------------------


def star_P(p: ProjectorSpec, a: ShadowElement, b: ShadowElement) -> ShadowElement:
    return p(star_weyl(p(a), p(b)))


def bracket_P(p: ProjectorSpec, a: ShadowElement, b: ShadowElement) -> ShadowElement:
    return p(bracket_weyl(a, b))


def shape_arity(t: Shape) -> int:
    return 1 if t == LEAF else shape_arity(t[0]) + shape_arity(t[1])


def tree_bracket(t: Shape, p: ProjectorSpec, args: Sequence[ShadowElement]) -> ShadowElement:
    """Nested ``bracket_P`` along the shape ``t`` (leaves consume ``args`` left to right)."""
    if shape_arity(t) != len(args):
        raise ValueError(f"shape {format_shape(t)} has {shape_arity(t)} leaves, got {len(args)} arguments")

    def walk(s: Shape, xs: Sequence[ShadowElement]) -> ShadowElement:
        if s == LEAF:
            return xs[0]
        k = shape_arity(s[0])
        return bracket_P(p, walk(s[0], xs[:k]), walk(s[1], xs[k:]))

    return walk(t, list(args))


def associativity_defect(prod: Callable, a, b, c) -> ShadowElement:
    return prod(prod(a, b), c) - prod(a, prod(b, c))


# -- twisted products --------------------------------------------------------------------


@dataclass
class TwistSpec:
    """Values ``R(h[g], h[g'])`` on pairs of generators; missing pairs are zero."""

    ctx: Context
    table: Dict[Tuple[LTree, LTree], ShadowElement] = field(default_factory=dict)

    def pair(self, g: LTree, h: LTree) -> Optional[ShadowElement]:
        return self.table.get((g, h))


def load_twist(ctx: Context, data: list) -> TwistSpec:
    """Twist from ``[{"key": [tree, tree], "value": element-JSON}, ...]``."""
    table = {}
    for entry in data:
        if len(entry["key"]) != 2:
            raise ValueError("twist keys are pairs of trees")
        g, h = (parse_tree(t) for t in entry["key"])
        table[(g, h)] = element_from_json(entry["value"], ctx)
    return TwistSpec(ctx, table)


def twist_from_star_normal(ctx: Context) -> TwistSpec:
    """``R(h[g], h[g'])`` = the degree-raising part of ``h[g] * h[g']`` (normal star)."""
    table = {}
    for g in enumerate_positive(ctx.d, ctx.N):
        for h in enumerate_positive(ctx.d, ctx.N):
            x, y = ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h)
            jump = star_normal(x, y) - shadow_mul(x, y)
            if jump:
                table[(g, h)] = jump
    return TwistSpec(ctx, table)


def twist_concat(ctx: Context) -> TwistSpec:
    """``R(h[g], h[g']) = h[g v g']`` on all generator pairs (canonicalised)."""
    table = {}
    for g in enumerate_positive(ctx.d, ctx.N):
        for h in enumerate_positive(ctx.d, ctx.N):
            x = shadow_word(ctx, [concat(g, h)])
            if x:
                table[(g, h)] = x
    return TwistSpec(ctx, table)


def _R(r: TwistSpec, left: Monomial, right: Monomial) -> Optional[ShadowElement]:
    # R(1, 1) = 1; R vanishes when exactly one side is empty; singletons come
    # from the table; larger subsets are zero unless supplied
    if not left and not right:
        return ShadowElement.unit(r.ctx)
    if not left or not right:
        return None
    if len(left) == 1 and len(right) == 1:
        return r.pair(left[0], right[0])
    return None


def _subsets(n: int):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def star_R(r: TwistSpec, a: ShadowElement, b: ShadowElement) -> ShadowElement:
    ctx = a.ctx
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for I in _subsets(len(ma)):
                rest_a = tuple(t for k, t in enumerate(ma) if k not in I)
                for J in _subsets(len(mb)):
                    val = _R(r, tuple(ma[k] for k in I), tuple(mb[k] for k in J))
                    if val is None or not val:
                        continue
                    rest_b = tuple(t for k, t in enumerate(mb) if k not in J)
                    term = shadow_mul(shadow_mul(val, shadow_word(ctx, rest_a)), shadow_word(ctx, rest_b))
                    _accumulate(out, term.terms, ca * cb)
    return ShadowElement._wrap(ctx, out)


# -- Yang-Baxter type residual ---------------------------------------------------------


@dataclass
class QYBEReport:
    g: LTree
    h: LTree
    residuals: List[ShadowElement]
    probes: List[ShadowElement]

    @property
    def max_support(self) -> int:
        return max((len(x.terms) for x in self.residuals), default=0)

    @property
    def all_zero(self) -> bool:
        return not any(self.residuals)

    def to_json(self) -> dict:
        return {
            "g": format_tree(self.g),
            "h": format_tree(self.h),
            "all_zero": self.all_zero,
            "max_support": self.max_support,
            "residuals": [format_element(x) for x in self.residuals],
        }


def left_operator(r: TwistSpec, g: LTree) -> Callable[[ShadowElement], ShadowElement]:
    def op(x: ShadowElement) -> ShadowElement:
        return star_R(r, ShadowElement.generator(x.ctx, g), x)
    return op


def qybe_residual(r: TwistSpec, g: LTree, h: LTree, probes: Sequence[ShadowElement]) -> QYBEReport:
    """``L_g L_h x - q_{h,g} L_h L_g x - L_{g v h} x`` for each probe ``x``."""
    ctx = r.ctx
    Lg, Lh = left_operator(r, g), left_operator(r, h)
    joined = canonicalize_tree(concat(g, h), ctx)
    qhg = ctx.coeff(coeffs.q_pair(h, g))
    residuals = []
    for x in probes:
        res = Lg(Lh(x)) - Lh(Lg(x)).scale(qhg)
        if not joined.is_zero:
            res = res - left_operator(r, joined.tree)(x).scale(joined.coeff)
        residuals.append(res)
    return QYBEReport(g, h, residuals, list(probes))


def default_probes(ctx: Context, max_len: int = 2) -> List[ShadowElement]:
    gens = enumerate_positive(ctx.d, ctx.N)
    out = [ShadowElement.unit(ctx)]
    for k in range(1, max_len + 1):
        for m in itertools.combinations_with_replacement(sorted(gens, key=tree_key, reverse=True), k):
            if is_monomial(m, ctx):
                out.append(ShadowElement.basis(ctx, m))
    return out


def dumps_table(entries: Dict[tuple, ShadowElement]) -> str:
    rows = []
    for key, value in entries.items():
        rows.append({"key": [format_tree(t) for t in key], "value": element_to_json(value)})
    return json.dumps(rows, indent=2)
