"""Text and JSON forms of elements.

Grammar of the text form::

    element := term (('+' | '-') term)*  |  '0'
    term    := [coeff '*'] gen+  |  coeff
    gen     := 'h' tree
    coeff   := rational | q-monomial product | '(' poly ')' ['/' '(' poly ')']

Examples: ``h[1] h[2]``, ``-3/2 q[1,2]^-1 * h[[1,2]]``,
``(1)/(1 + q[1,2]^2) * h[2] h[1]``.
"""

from __future__ import annotations

import json
import re
import warnings
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import Context, EnvelopeElement, ShadowElement, _accumulate, _Element, normal_order, shadow_word
from .polynomials import (CoefficientSyntaxError, LaurentPolynomial, RationalFunction, format_laurent,
                          format_rational, parse_laurent, parse_rational_prefix)
from .trees import TreeSyntaxError, format_tree, is_leaf, parse_tree, parse_tree_prefix, size


class ElementSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class TruncationWarning(UserWarning):
    pass


# -- formatting -------------------------------------------------------------------------


def format_coeff(c) -> str:
    if isinstance(c, RationalFunction):
        return format_rational(c)
    return str(c)


def _needs_parens(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return (" + " in body or " - " in body) and not s.startswith("(")


def format_gen(t) -> str:
    """``h[1]`` for a leaf, ``h[[1,2],3]`` for a node (the node's own brackets)."""
    return f"h[{t}]" if is_leaf(t) else f"h{format_tree(t)}"


def format_monomial(m: Sequence) -> str:
    return " ".join(format_gen(t) for t in m)


def _parse_gen(src: str, pos: int):
    """Parse ``h[content]`` where content is ``tree`` or ``tree ',' tree``."""
    pos = _skip(src, pos + 1)
    if not src.startswith("[", pos):
        raise ElementSyntaxError("expected '[' after 'h'", pos)
    try:
        first, pos = parse_tree_prefix(src, pos + 1)
        pos = _skip(src, pos)
        if src.startswith(",", pos):
            second, pos = parse_tree_prefix(src, pos + 1)
            first = (first, second)
            pos = _skip(src, pos)
    except TreeSyntaxError as exc:
        raise ElementSyntaxError(f"bad tree ({exc})", exc.position) from None
    if not src.startswith("]", pos):
        raise ElementSyntaxError("expected ']'", pos)
    return first, pos + 1


def format_element(x: _Element) -> str:
    if not x.terms:
        return "0"
    parts: List[str] = []
    for m, c in x.items():
        cs = format_coeff(c)
        if _needs_parens(cs):
            cs = f"({cs})"
        neg = cs.startswith("-")
        mag = cs[1:] if neg else cs
        if not m:
            body = mag
        elif mag == "1":
            body = format_monomial(m)
        else:
            body = f"{mag} * {format_monomial(m)}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def element_to_json(x: _Element) -> list:
    out = []
    for m, c in x.items():
        entry = {"monomial": [format_tree(t) for t in m]}
        if isinstance(c, Fraction):
            entry["coeff_num"] = str(c.numerator)
            entry["coeff_den"] = str(c.denominator)
        else:
            entry["coeff_num"] = format_laurent(c.num)
            entry["coeff_den"] = format_laurent(c.denominator())
        out.append(entry)
    return out


def element_from_json(data: list, ctx: Context, kind=ShadowElement) -> _Element:
    total = kind.zero(ctx)
    for entry in data:
        num = RationalFunction(parse_laurent(str(entry["coeff_num"])))
        den = RationalFunction(parse_laurent(str(entry.get("coeff_den", "1"))))
        trees = [parse_tree(t) for t in entry["monomial"]]
        total = total + _build_term(ctx, kind, trees, num / den)
    return total


# -- parsing ------------------------------------------------------------------------------


_WS = re.compile(r"\s*")


def _skip(src: str, pos: int) -> int:
    return _WS.match(src, pos).end()


def _build_term(ctx: Context, kind, trees, coeff) -> _Element:
    c = ctx.coeff(coeff)
    if kind is EnvelopeElement:
        return normal_order(trees, c, ctx)
    return shadow_word(ctx, trees, c)


def parse_element(src: str, ctx: Context, kind=ShadowElement) -> _Element:
    """Parse ``src`` into an element of ``kind`` (shadow or envelope).

    Generators with too many leaves are dropped with a
    :class:`TruncationWarning`; generators that vanish by the bracket
    convention (``h[[1,1]]``) also warn.
    """
    pos = _skip(src, 0)
    if src[pos:].strip() == "0":
        return kind.zero(ctx)
    total: dict = {}
    sign = 1
    first = True
    while True:
        pos = _skip(src, pos)
        if pos >= len(src):
            if first:
                raise ElementSyntaxError("empty element", pos)
            raise ElementSyntaxError("expected term after sign", pos)
        if src[pos] in "+-":
            if src[pos] == "-":
                sign = -sign
            pos = _skip(src, pos + 1)
        elif not first:
            raise ElementSyntaxError("expected '+' or '-'", pos)
        term, pos = _parse_term(src, pos, ctx, kind, sign)
        _accumulate(total, term.terms)
        first = False
        sign = 1
        pos = _skip(src, pos)
        if pos >= len(src):
            break
        if src[pos] not in "+-":
            raise ElementSyntaxError("expected '+' or '-'", pos)
    return kind._wrap(ctx, total)


def _parse_term(src: str, pos: int, ctx: Context, kind, sign: int):
    coeff: Optional[RationalFunction] = None
    if not src.startswith("h", pos):
        try:
            coeff, pos = parse_rational_prefix(src, pos)
        except CoefficientSyntaxError as exc:
            raise ElementSyntaxError(f"bad coefficient ({exc})", exc.position) from None
        pos = _skip(src, pos)
        if src.startswith("*", pos):
            pos = _skip(src, pos + 1)
            if not src.startswith("h", pos):
                raise ElementSyntaxError("expected generator after '*'", pos)
    trees = []
    while src.startswith("h", pos):
        t, pos = _parse_gen(src, pos)
        ctx.check_tree(t)
        if size(t) > ctx.N:
            warnings.warn(f"{format_gen(t)} exceeds truncation N={ctx.N}; dropped", TruncationWarning)
        trees.append(t)
        pos = _skip(src, pos)
    if coeff is None and not trees:
        raise ElementSyntaxError("expected coefficient or generator", pos)
    if coeff is None:
        coeff = RationalFunction(1)
    term = _build_term(ctx, kind, trees, coeff * sign)
    if trees and not term and coeff:
        warnings.warn(f"term {format_monomial(trees)} vanishes", TruncationWarning)
    return term, pos


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
