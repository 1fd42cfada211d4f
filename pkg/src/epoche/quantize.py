"""Quantization maps, star products and brackets on the classical shadow.

* normal quantization ``Q``: a sorted shadow monomial maps to the same
  normal-ordered word; :func:`star_normal` is the product transported by it.
* q-Weyl quantization ``W``: the q-symmetrisation weighted by
  ``q_perm / Z``; :func:`star_weyl` is the product transported by it.
* brackets are degree ``|f| + |g| + 1`` components of q-commutators or of
  the Weyl product, computed per pair of basis monomials and extended
  bilinearly.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import coeffs
from .algebra import (UNIT, Context, EnvelopeElement, Monomial, ShadowElement, _accumulate, _Element,
                      _times_monomial, envelope_mul, monomial_degree, normal_order, reinterpret, shadow_mul,
                      swap_coeff)
from .polynomials import RationalFunction, Specialization
from .trees import LTree, compose as compose_tree, format_tree, is_positive, precedes, shapes, size, tree_key


def _check_same(a: _Element, b: _Element) -> None:
    a._check(b)


# -- normal quantization -----------------------------------------------------------------


def normal_Q(a: ShadowElement) -> EnvelopeElement:
    return reinterpret(a, EnvelopeElement)


def normal_Q_inverse(x: EnvelopeElement) -> ShadowElement:
    return reinterpret(x, ShadowElement)


def star_normal(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    _check_same(a, b)
    return normal_Q_inverse(envelope_mul(normal_Q(a), normal_Q(b)))


def _compositions(n: int):
    """Ordered tuples of positive integers summing to ``n``."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def star_normal_closed(a: Monomial, b: Monomial, ctx: Context, literal: bool = True) -> ShadowElement:
    """Closed combinatorial formula for the normal star product of basis monomials.

    Sum over block sizes, block shapes and block-increasing permutations
    ``s`` of ``q_perm(gs, s)**-1`` times the product of the composed trees,
    kept only when every composed tree is positive (and within truncation)
    and the composed trees are already in non-increasing order.

    With ``literal=False`` each surviving term is divided by the product of
    factorials of the multiplicities of equal composed trees; that is the
    number of block-increasing permutations producing the same term by
    exchanging whole equal blocks.
    """
    gs = tuple(a) + tuple(b)
    n = len(gs)
    out: Dict[Monomial, object] = {}
    if n == 0:
        return ShadowElement.unit(ctx)
    for parts in _compositions(n):
        if any(m > ctx.N for m in parts):
            continue  # a block of m arguments has at least m leaves
        perms = coeffs.shuffles(parts)
        for shape_tuple in itertools.product(*(shapes(m) for m in parts)):
            for s in perms:
                args = coeffs.permute(gs, s)
                composed = []
                offset = 0
                ok = True
                for shape, m in zip(shape_tuple, parts):
                    g = compose_tree(shape, tuple(range(m)), args[offset:offset + m])
                    offset += m
                    if size(g) > ctx.N or not is_positive(g):
                        ok = False
                        break
                    composed.append(g)
                if not ok:
                    continue
                if any(precedes(composed[i], composed[i + 1]) for i in range(len(composed) - 1)):
                    continue
                c = ctx.coeff(coeffs.q_perm(gs, s).invert_monomial())
                if not literal:
                    weight = 1
                    for k in Counter(composed).values():
                        weight *= factorial(k)
                    c = c * ctx.coeff(Fraction(1, weight))
                _accumulate(out, {tuple(composed): c})
    return ShadowElement._wrap(ctx, out)


def _bilinear(ctx: Context, a: _Element, b: _Element, on_monomials: Callable, cls=ShadowElement):
    out: Dict[Monomial, object] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            _accumulate(out, on_monomials(ma, mb).terms, ca * cb)
    return cls._wrap(ctx, out)


def _basis(ctx: Context, m: Monomial) -> ShadowElement:
    return ShadowElement._wrap(ctx, {m: ctx.one})


def bracket_normal(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    """Degree ``|w| + |w'| + 1`` part of ``w * w' - q(w', w) w' * w`` (normal star)."""
    _check_same(a, b)
    ctx = a.ctx
    memo = ctx.memo("bracket_normal")

    def on(ma, mb):
        key = (ma, mb)
        hit = memo.get(key)
        if hit is None:
            x, y = _basis(ctx, ma), _basis(ctx, mb)
            comm = star_normal(x, y) - star_normal(y, x).scale(swap_coeff(mb, ma))
            hit = memo[key] = comm.graded_component(monomial_degree(ma) + monomial_degree(mb) + 1)
        return hit

    return _bilinear(ctx, a, b, on)


def bracket_normal_delta(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    """Variant read off from ``Q(w') Q(w) - q(w, w') Q(w) Q(w')``.

    Equal to ``-q(w, w') <w, w'>`` on basis monomials.
    """
    _check_same(a, b)
    ctx = a.ctx

    def on(ma, mb):
        x, y = _basis(ctx, ma), _basis(ctx, mb)
        comm = star_normal(y, x) - star_normal(x, y).scale(swap_coeff(ma, mb))
        return comm.graded_component(monomial_degree(ma) + monomial_degree(mb) + 1)

    return _bilinear(ctx, a, b, on)


# -- q-Weyl quantization --------------------------------------------------------------


def _weyl_monomial(ctx: Context, m: Monomial) -> Dict[Monomial, object]:
    memo = ctx.memo("weyl")
    hit = memo.get(m)
    if hit is not None:
        return hit
    n = len(m)
    out: Dict[Monomial, object] = {}
    z = 0 if ctx.spec is not None else None
    for s in coeffs.permutations(n):
        qp = coeffs.q_perm(m, s)
        c = ctx.coeff(qp)
        if ctx.spec is not None:
            z += c * c
        _accumulate(out, normal_order(coeffs.permute(m, s), c, ctx).terms)
    if ctx.spec is None:
        zinv = RationalFunction(coeffs.partition_Z(m)).invert()
    else:
        zinv = 1 / z
    out = {k: v * zinv for k, v in out.items()}
    memo[m] = out
    return out


def weyl_W(a: ShadowElement) -> EnvelopeElement:
    ctx = a.ctx
    out: Dict[Monomial, object] = {}
    for m, c in a.terms.items():
        _accumulate(out, _weyl_monomial(ctx, m), c)
    return EnvelopeElement._wrap(ctx, out)


def weyl_W_inverse(x: EnvelopeElement) -> ShadowElement:
    """The unique ``f`` with ``weyl_W(f) == x``, by degree-ascending correction."""
    ctx = x.ctx
    f = normal_Q_inverse(x)
    residual = weyl_W(f) - x
    while residual.terms:
        k = min(monomial_degree(m) for m in residual.terms)
        low = residual.graded_component(k)
        f = f - normal_Q_inverse(low)
        residual = residual - weyl_W(normal_Q_inverse(low))
        if residual.terms and min(monomial_degree(m) for m in residual.terms) <= k:
            raise AssertionError("triangular inversion made no progress")
    return f


def star_weyl(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    _check_same(a, b)
    ctx = a.ctx
    memo = ctx.memo("star_weyl")

    def on(ma, mb):
        key = (ma, mb)
        hit = memo.get(key)
        if hit is None:
            prod = envelope_mul(weyl_W(_basis(ctx, ma)), weyl_W(_basis(ctx, mb)))
            hit = memo[key] = weyl_W_inverse(prod)
        return hit

    return _bilinear(ctx, a, b, on)


def _max_degree(ctx: Context, x: _Element) -> int:
    """Largest degree reachable from the terms of ``x`` within truncation."""
    best = 0
    for m in x.terms:
        leaves = sum(size(t) for t in m)
        best = max(best, leaves - -(-leaves // ctx.N))
    return best


def star_weyl_recursive(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    """Weyl product via the alternating-sum formula for its graded components.

    ``pi_m(f * g) = pi_m phi^-1 sum_r (-1)^r sum_{l_1 < ... < l_r < m}
    (W pi_{l_r} phi^-1) ... (W pi_{l_1} phi^-1) [W(f) W(g)]``.
    """
    _check_same(a, b)
    ctx = a.ctx
    prod = envelope_mul(weyl_W(a), weyl_W(b))
    top = _max_degree(ctx, prod)

    def step(x: EnvelopeElement, level: int) -> EnvelopeElement:
        return weyl_W(normal_Q_inverse(x).graded_component(level))

    result = ShadowElement.zero(ctx)
    for m in range(top + 1):
        acc = EnvelopeElement.zero(ctx)
        for r in range(m + 1):
            for levels in itertools.combinations(range(m), r):
                x = prod
                for level in levels:
                    x = step(x, level)
                    if not x.terms:
                        break
                acc = acc + (x if r % 2 == 0 else -x)
        result = result + normal_Q_inverse(acc).graded_component(m)
    return result


def bracket_weyl(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    """Canonical distortion: degree ``|w| + |w'| + 1`` part of the Weyl product."""
    _check_same(a, b)
    ctx = a.ctx

    def on(ma, mb):
        prod = star_weyl(_basis(ctx, ma), _basis(ctx, mb))
        return prod.graded_component(monomial_degree(ma) + monomial_degree(mb) + 1)

    return _bilinear(ctx, a, b, on)


def bracket_weyl_antisym(a: ShadowElement, b: ShadowElement) -> ShadowElement:
    """``<w, w'> - q(w', w) <w', w>`` per pair of basis monomials."""
    _check_same(a, b)
    ctx = a.ctx

    def on(ma, mb):
        x, y = _basis(ctx, ma), _basis(ctx, mb)
        return bracket_weyl(x, y) - bracket_weyl(y, x).scale(swap_coeff(mb, ma))

    return _bilinear(ctx, a, b, on)


def degree_jumps(x: ShadowElement, base: int) -> Dict[int, ShadowElement]:
    """Split a product into its components by degree jump over ``base``.

    The jump-``k`` component is the coefficient of ``eps**k`` when the
    commutator is rescaled by a central parameter ``eps``.
    """
    return {k - base: x.graded_component(k) for k in x.degrees()}


# -- distortion witnesses ----------------------------------------------------------------


@dataclass
class DistortionReport:
    found_nonlinearity: bool
    u: Optional[Monomial] = None
    generator: Optional[LTree] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    modes_confirmed: List[str] = field(default_factory=list)
    lambda_pairs: List[dict] = field(default_factory=list)
    found_lambda_witness: bool = False

    def to_json(self) -> dict:
        return {
            "found_nonlinearity": self.found_nonlinearity,
            "u": None if self.u is None else [format_tree(t) for t in self.u],
            "generator": None if self.generator is None else format_tree(self.generator),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "modes_confirmed": self.modes_confirmed,
            "lambda_pairs": self.lambda_pairs,
            "found_lambda_witness": self.found_lambda_witness,
        }


def nonlinearity_defect(ctx: Context, g: LTree, u: Monomial) -> Tuple[EnvelopeElement, EnvelopeElement]:
    """``(W(h[g] u), h^[g] W(u))``."""
    hg = ShadowElement.generator(ctx, g)
    left = weyl_W(shadow_mul(hg, _basis(ctx, u)))
    right = envelope_mul(EnvelopeElement.generator(ctx, g), weyl_W(_basis(ctx, u)))
    return left, right


def proportionality(x: ShadowElement, y: ShadowElement):
    """``lam`` with ``x == lam * y`` if it exists, else None (``y`` nonzero)."""
    if not y.terms:
        return None
    m0 = next(iter(y.items()))[0]
    lam = x.coefficient(m0) / y.coefficient(m0)
    if x == y.scale(lam):
        return lam
    return None


def distortion_witness(ctx: Context, specs: Sequence[Specialization] = (), max_len: int = 3) -> DistortionReport:
    """Search degree-0 monomials ``u`` with ``W(h[1,2] u) != h^[1,2] W(u)``.

    A hit is confirmed in symbolic mode and under every specialization in
    ``specs``.  Also compares the antisymmetrised bracket with the canonical
    distortion on the pairs ``(h1, h2)`` and ``(h1 h1, h2)``: a uniform
    ``lam`` with ``<f,g>_- = lam <f,g>`` would need the two ratios to agree.
    """
    if ctx.N < 2:
        raise ValueError("the generator h[1,2] needs N >= 2")
    sym = ctx.with_spec(None)
    g = (1, 2)
    report = DistortionReport(found_nonlinearity=False)
    leaves = range(1, 2 * ctx.d + 1)
    for n in range(1, max_len + 1):
        for u in itertools.combinations_with_replacement(sorted(leaves, reverse=True), n):
            left, right = nonlinearity_defect(sym, g, u)
            if left == right:
                continue
            confirmed = ["symbolic"]
            for spec in specs:
                sctx = ctx.with_spec(spec)
                l2, r2 = nonlinearity_defect(sctx, g, u)
                if l2 != r2:
                    confirmed.append(repr(spec))
            if len(confirmed) == 1 + len(specs):
                report.found_nonlinearity = True
                report.u, report.generator = u, g
                report.lhs, report.rhs = str(left), str(right)
                report.modes_confirmed = confirmed
                break
        if report.found_nonlinearity:
            break

    pairs = [((1,), (2,)), ((1, 1), (2,))]
    ratios = []
    for f, h in pairs:
        fe, he = _basis(sym, f), _basis(sym, h)
        minus = bracket_weyl_antisym(fe, he)
        plain = bracket_weyl(fe, he)
        lam = proportionality(minus, plain)
        ratios.append(lam)
        report.lambda_pairs.append({
            "f": [format_tree(t) for t in f],
            "g": [format_tree(t) for t in h],
            "antisymmetrized": str(minus),
            "distortion": str(plain),
            "ratio": None if lam is None else str(lam),
        })
    report.found_lambda_witness = any(r is None for r in ratios) or ratios[0] != ratios[1]
    return report
