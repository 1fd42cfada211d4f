"""Quantum-matrix coefficient algebra: relations, L_n/R_n sums and membership checks.

The algebra is kept as a free algebra on generators ``A[row, col]`` (one
for each pair of positive trees) modulo the two-sided ideal spanned by the
length-2 relations of :func:`relations`.  No normal form for the quotient is
built.  For ``n = 2`` the transformation law of ``L_2`` and ``R_2`` is an
exact identity against a single relation; for ``n = 3`` membership of the
defect in the ideal is decided by linear algebra in the length-3 slice at
random specializations.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import coeffs
from .polynomials import ONE, LaurentPolynomial, RationalFunction, Specialization, format_laurent
from .report import PropertyResult
from .trees import LTree, enumerate_positive, format_tree, is_positive, tree_key

MatrixGenerator = Tuple[LTree, LTree]
FreeWord = Tuple[MatrixGenerator, ...]


class FreeElement:
    """Linear combination of words in the generators ``A[row, col]``.

    Coefficients are Laurent polynomials in the q-variables, or Fractions
    after :meth:`evaluate`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[FreeWord, object]] = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def generator(cls, row: LTree, col: LTree) -> "FreeElement":
        return cls({((row, col),): ONE})

    @classmethod
    def word(cls, gens: Sequence[MatrixGenerator], coeff=ONE) -> "FreeElement":
        return cls({tuple(gens): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return FreeElement(out)

    def __neg__(self) -> "FreeElement":
        return FreeElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        return FreeElement({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        out: Dict[FreeWord, object] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                c = ca * cb
                out[w] = out[w] + c if w in out else c
        return FreeElement(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return not (self - other).terms

    __hash__ = None

    def evaluate(self, spec: Specialization) -> "FreeElement":
        out = {}
        for w, c in self.terms.items():
            out[w] = c.evaluate(spec) if isinstance(c, (LaurentPolynomial, RationalFunction)) else Fraction(c)
        return FreeElement(out)

    def ratio_to(self, other: "FreeElement"):
        """``c`` with ``self == c * other``, or None."""
        if not other.terms:
            return None if self.terms else ONE
        w0 = min(other.terms, key=_word_key)
        c = self.terms.get(w0)
        if c is None:
            return None
        d = other.terms[w0]
        if isinstance(c, LaurentPolynomial):
            if not d.is_monomial():
                return None
            lam = c * d.invert_monomial()
        else:
            lam = Fraction(c) / Fraction(d)
        return lam if self == other.scale(lam) else None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=_word_key):
            c = self.terms[w]
            cs = format_laurent(c) if isinstance(c, LaurentPolynomial) else str(c)
            body = " ".join(f"A[{format_tree(r)};{format_tree(s)}]" for r, s in w)
            parts.append(body if cs == "1" else f"({cs}) {body}")
        return " + ".join(parts)

    __repr__ = __str__


def _word_key(w: FreeWord):
    return tuple((tree_key(r), tree_key(s)) for r, s in w)


def _gen(row: LTree, col: LTree) -> FreeElement:
    return FreeElement.generator(row, col)


def _check_trees(trees: Iterable[LTree]) -> None:
    for t in trees:
        if not is_positive(t):
            raise ValueError(f"{format_tree(t)} is not a positive tree")


def relations(g1: LTree, g2: LTree, h1: LTree, h2: LTree) -> Tuple[FreeElement, FreeElement]:
    """The two length-2 relations for rows ``(g1, g2)`` and columns ``(h1, h2)``.

    Each is written as left-hand side minus right-hand side.
    """
    _check_trees((g1, g2, h1, h2))
    qg = coeffs.q_pair(g1, g2)
    qh = coeffs.q_pair(h1, h2)
    A = _gen
    first = (A(g2, h1) * A(g1, h2) + (A(g2, h2) * A(g1, h1)).scale(qh)
             - (A(g1, h1) * A(g2, h2) + (A(g1, h2) * A(g2, h1)).scale(qh)).scale(qg))
    second = (A(g1, h2) * A(g2, h1) + (A(g2, h2) * A(g1, h1)).scale(qg)
              - (A(g1, h1) * A(g2, h2) + (A(g2, h1) * A(g1, h2)).scale(qg)).scale(qh))
    return first, second


def L_n(gs: Sequence[LTree], hs: Sequence[LTree]) -> FreeElement:
    """``sum_k A[g1, h_k(1)] ... A[gn, h_k(n)] q_perm(hs, k)``."""
    if len(gs) != len(hs):
        raise ValueError(f"size mismatch: {len(gs)} rows, {len(hs)} columns")
    total = FreeElement()
    for k in coeffs.permutations(len(gs)):
        w = tuple((gs[i], hs[k[i]]) for i in range(len(gs)))
        total = total + FreeElement.word(w, coeffs.q_perm(hs, k))
    return total


def R_n(gs: Sequence[LTree], hs: Sequence[LTree]) -> FreeElement:
    """``sum_k A[g_k(1), h1] ... A[g_k(n), hn] q_perm(gs, k)``."""
    if len(gs) != len(hs):
        raise ValueError(f"size mismatch: {len(gs)} rows, {len(hs)} columns")
    total = FreeElement()
    for k in coeffs.permutations(len(gs)):
        w = tuple((gs[k[i]], hs[i]) for i in range(len(gs)))
        total = total + FreeElement.word(w, coeffs.q_perm(gs, k))
    return total


def left_defect(gs: Sequence[LTree], hs: Sequence[LTree], s: coeffs.Permutation) -> FreeElement:
    """``L_n(gs_s, hs) - q_perm(gs, s) L_n(gs, hs)``."""
    return L_n(coeffs.permute(gs, s), hs) - L_n(gs, hs).scale(coeffs.q_perm(gs, s))


def right_defect(gs: Sequence[LTree], hs: Sequence[LTree], s: coeffs.Permutation) -> FreeElement:
    """``R_n(gs, hs_s) - q_perm(hs, s) R_n(gs, hs)``."""
    return R_n(gs, coeffs.permute(hs, s)) - R_n(gs, hs).scale(coeffs.q_perm(hs, s))


# -- ideal membership in the length-3 slice -------------------------------------------


def _multiset_key(trees: Iterable[LTree]):
    return tuple(sorted(tree_key(t) for t in trees))


def _slice_spanners(rows: Sequence[LTree], cols: Sequence[LTree]) -> List[FreeElement]:
    """Products ``u r`` and ``r v`` of relations ``r`` with generators, restricted
    to the slice with the given row and column multisets (length 3)."""
    rows_key, cols_key = _multiset_key(rows), _multiset_key(cols)
    out: List[FreeElement] = []
    seen = set()
    for x in set(rows):
        for y in set(cols):
            rest_r = list(rows)
            rest_r.remove(x)
            rest_c = list(cols)
            rest_c.remove(y)
            for g1, g2 in set(itertools.permutations(rest_r)):
                for h1, h2 in set(itertools.permutations(rest_c)):
                    key = (x, y, g1, g2, h1, h2)
                    if key in seen:
                        continue
                    seen.add(key)
                    gen = _gen(x, y)
                    for r in relations(g1, g2, h1, h2):
                        if r:
                            out.append(gen * r)
                            out.append(r * gen)
    assert all(_multiset_key(t[0] for t in w) == rows_key and _multiset_key(t[1] for t in w) == cols_key
               for e in out for w in e.terms)
    return out


def _rank(rows: List[Dict[FreeWord, Fraction]], columns: List[FreeWord]) -> int:
    """Rank of a list of sparse row vectors (exact Gaussian elimination)."""
    pivots: Dict[FreeWord, Dict[FreeWord, Fraction]] = {}
    rank = 0
    for row in rows:
        v = dict(row)
        for col in columns:
            c = v.get(col)
            if not c:
                continue
            p = pivots.get(col)
            if p is None:
                pivots[col] = {k: x / c for k, x in v.items() if x}
                rank += 1
                break
            for k, x in p.items():
                nv = v.get(k, 0) - c * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
    return rank


def in_ideal_slice(x: FreeElement, rows: Sequence[LTree], cols: Sequence[LTree], spec: Specialization) -> bool:
    """Whether ``x`` (length 3, given multigrading) lies in the ideal at ``spec``."""
    target = x.evaluate(spec)
    if not target.terms:
        return True
    span = [e.evaluate(spec).terms for e in _slice_spanners(rows, cols)]
    columns = sorted({w for v in span + [target.terms] for w in v}, key=_word_key)
    r0 = _rank(span, columns)
    return _rank(span + [target.terms], columns) == r0


# -- reports -------------------------------------------------------------------------------


def _instance(gs, hs, s) -> dict:
    return {"rows": [format_tree(t) for t in gs], "cols": [format_tree(t) for t in hs], "perm": list(s)}


def _random_trees(rng: random.Random, pool: Sequence[LTree], n: int) -> Tuple[LTree, ...]:
    return tuple(rng.choice(pool) for _ in range(n))


def verify_Ln_transform(n: int, trials: int, seed: int, d: int = 1, N: int = 2,
                        n_specs: int = 3) -> List[PropertyResult]:
    """Check the transformation law of ``L_n`` and ``R_n`` under row/column swaps.

    ``n = 2``: the defect is an exact q-monomial multiple of the matching
    relation (symbolic).  ``n = 3``: the defect lies in the length-3 slice of
    the ideal at ``n_specs`` independent random specializations.
    """
    if n not in (2, 3):
        raise ValueError("n must be 2 or 3")
    rng = random.Random(seed)
    pool = enumerate_positive(d, N)
    left = PropertyResult("L_n transformation law", n)
    right = PropertyResult("R_n transformation law", n)
    if n == 2:
        swap = (1, 0)
        for _ in range(trials):
            g1, g2, h1, h2 = _random_trees(rng, pool, 4)
            rel_l, rel_r = relations(g1, g2, h1, h2)
            for res, defect, rel in ((left, left_defect((g1, g2), (h1, h2), swap), rel_l),
                                     (right, right_defect((g1, g2), (h1, h2), swap), rel_r)):
                res.instances += 1
                lam = defect.ratio_to(rel)
                if lam is None or not (isinstance(lam, LaurentPolynomial) and (lam.is_monomial() or not lam)):
                    res.fail(_instance((g1, g2), (h1, h2), swap) | {"defect": str(defect)})
        return [left, right]
    specs = [Specialization.random(d, rng) for _ in range(n_specs)]
    for res in (left, right):
        res.mode = "specialized"
        res.notes.append(f"{n_specs} random specializations")
    for _ in range(trials):
        gs = _random_trees(rng, pool, 3)
        hs = _random_trees(rng, pool, 3)
        s = tuple(rng.sample(range(3), 3))
        for res, defect in ((left, left_defect(gs, hs, s)), (right, right_defect(gs, hs, s))):
            res.instances += 1
            for spec in specs:
                if not in_ideal_slice(defect, gs, hs, spec):
                    res.fail(_instance(gs, hs, s) | {"specialization": repr(spec)})
                    break
    return [left, right]


def verify_coefficient_identities(nmax: int, trials: int, seed: int, d: int = 1, N: int = 3) -> List[PropertyResult]:
    """Classical limit ``sum_s C(s) q_perm(gs, s) = 1`` and the transformation
    law ``C_{gs_t}(t^-1 o s) = q_perm(gs, t) C_gs(s)``, symbolically."""
    rng = random.Random(seed)
    pool = enumerate_positive(d, N)
    out = []
    for n in range(1, nmax + 1):
        limit = PropertyResult("classical limit", n)
        law = PropertyResult("C transformation law", n)
        perms = list(coeffs.permutations(n))
        for _ in range(trials):
            gs = _random_trees(rng, pool, n)
            cs = coeffs.weyl_coeffs(gs)
            total = RationalFunction(0)
            for s in perms:
                total = total + cs[s] * coeffs.q_perm(gs, s)
            limit.instances += 1
            if total != 1:
                limit.fail({"trees": [format_tree(t) for t in gs]})
            t = rng.choice(perms)
            ct = coeffs.weyl_coeffs(coeffs.permute(gs, t))
            tinv = coeffs.inverse(t)
            qt = coeffs.q_perm(gs, t)
            for s in perms:
                law.instances += 1
                if ct[coeffs.compose(tinv, s)] != cs[s] * qt:
                    law.fail({"trees": [format_tree(t_) for t_ in gs], "tau": list(t), "sigma": list(s)})
                    break
        out += [limit, law]
    return out
