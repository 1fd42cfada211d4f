"""q-pairings of trees, permutation coefficients and the q-Weyl weights.

Permutations are tuples of 0-based images: ``s[i]`` is the image of ``i``.
``permute(gs, s)`` is the reordered tuple ``(gs[s[0]], gs[s[1]], ...)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .polynomials import ONE, LaurentPolynomial, RationalFunction
from .trees import LTree, word

Permutation = Tuple[int, ...]


# -- permutations ----------------------------------------------------------------


def identity(n: int) -> Permutation:
    return tuple(range(n))


def is_permutation(s: Sequence[int]) -> bool:
    return sorted(s) == list(range(len(s)))


def compose(s: Permutation, t: Permutation) -> Permutation:
    """``(s o t)(i) = s(t(i))``."""
    if len(s) != len(t):
        raise ValueError("permutations of different sizes")
    return tuple(s[i] for i in t)


def inverse(s: Permutation) -> Permutation:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def transposition(n: int, i: int, j: int) -> Permutation:
    s = list(range(n))
    s[i], s[j] = s[j], s[i]
    return tuple(s)


def permutations(n: int) -> Iterator[Permutation]:
    return itertools.permutations(range(n))


def permute(gs: Sequence, s: Permutation) -> tuple:
    if len(gs) != len(s):
        raise ValueError(f"size mismatch: {len(gs)} items, permutation of size {len(s)}")
    return tuple(gs[i] for i in s)


def shuffles(parts: Sequence[int]) -> List[Permutation]:
    """Permutations increasing on each consecutive block of the given sizes."""
    if not parts or any(m < 1 for m in parts):
        raise ValueError("parts must be a nonempty list of positive integers")
    n = sum(parts)
    out = []

    def rec(block: int, remaining: Tuple[int, ...], acc: Tuple[int, ...]):
        if block == len(parts):
            out.append(acc)
            return
        for chosen in itertools.combinations(remaining, parts[block]):
            rest = tuple(x for x in remaining if x not in chosen)
            rec(block + 1, rest, acc + chosen)

    rec(0, tuple(range(n)), ())
    return sorted(out)


# -- q-pairings ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _pair_from_words(a: Tuple[int, ...], b: Tuple[int, ...]) -> LaurentPolynomial:
    exps = {}
    for x in a:
        for y in b:
            if x != y:
                exps[(x, y)] = exps.get((x, y), 0) + 1
    return LaurentPolynomial.monomial(exps)


def label_pair(a: Sequence[int], b: Sequence[int]) -> LaurentPolynomial:
    """``prod q[x,y]`` over ``x`` in ``a`` and ``y`` in ``b`` (label multisets)."""
    return _pair_from_words(tuple(sorted(a)), tuple(sorted(b)))


def q_pair(a: LTree, b: LTree) -> LaurentPolynomial:
    """``q_{a,b}``: product of ``q[x,y]`` over leaf labels ``x`` of ``a``, ``y`` of ``b``."""
    return label_pair(word(a), word(b))


def q_perm(gs: Sequence[LTree], s: Permutation) -> LaurentPolynomial:
    """Monomial ``c`` with ``h[gs[s[0]]] ... h[gs[s[n-1]]] = c * h[gs[0]] ... h[gs[n-1]]``
    in the q-commutative shadow.

    Every pair ``i < j`` that appears in the opposite order in the permuted
    word contributes ``q_pair(gs[i], gs[j])``.
    """
    if len(gs) != len(s):
        raise ValueError(f"size mismatch: {len(gs)} trees, permutation of size {len(s)}")
    pos = inverse(s)
    out = ONE
    n = len(gs)
    for i in range(n):
        for j in range(i + 1, n):
            if pos[i] > pos[j]:
                out = out * q_pair(gs[i], gs[j])
    return out


def q_perm_printed(gs: Sequence[LTree], s: Permutation) -> LaurentPolynomial:
    """The inversion product with the opposite factor orientation ``q_pair(gs[j], gs[i])``.

    Kept for comparison only; it is the inverse of :func:`q_perm`.
    """
    return q_perm(gs, s).invert_monomial()


def partition_Z(gs: Sequence[LTree]) -> LaurentPolynomial:
    """``sum over s of q_perm(gs, s)**2``."""
    total = LaurentPolynomial.const(0)
    for s in permutations(len(gs)):
        total = total + q_perm(gs, s) ** 2
    return total


def weyl_coeff(gs: Sequence[LTree], s: Permutation) -> RationalFunction:
    return RationalFunction(q_perm(gs, s)) / RationalFunction(partition_Z(gs))


def weyl_coeffs(gs: Sequence[LTree]) -> dict:
    """All coefficients ``{s: weyl_coeff(gs, s)}`` sharing one normaliser."""
    z_inv = RationalFunction(partition_Z(gs)).invert()
    return {s: z_inv * q_perm(gs, s) for s in permutations(len(gs))}
