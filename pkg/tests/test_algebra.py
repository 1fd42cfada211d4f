import random
import warnings

import pytest
from hypothesis import given, strategies as st

from epoche.algebra import (Context, ContextMismatch, EnvelopeElement, RewriteStats, ShadowElement, chain_bound,
                            canonicalize_tree, envelope_mul, is_monomial, normal_order, shadow_mul,
                            swap_coeff)
from epoche.polynomials import LaurentPolynomial, Specialization
from epoche.textio import (ElementSyntaxError, TruncationWarning, element_from_json, element_to_json,
                           format_element, parse_element)
from epoche.trees import TreeError, enumerate_positive

from conftest import shadow_st

q12 = LaurentPolynomial.q(1, 2)


def env(ctx, src):
    return parse_element(src, ctx, EnvelopeElement)


def sh(ctx, src):
    return parse_element(src, ctx)


# -- frozen normal forms from the independent sympy oracle ------------------------------


def test_basic_relation(ctx13):
    assert normal_order([1, 2], 1, ctx13) == env(ctx13, "q[1,2]^-1 * h[2] h[1] + h[1,2]")
    assert format_element(normal_order([1, 2], 1, ctx13)) == "q[1,2]^-1 * h[2] h[1] + h[1,2]"


def test_three_letter_word(ctx13):
    got = normal_order([2, 1, 2], 1, ctx13)
    assert got == env(ctx13, "q[1,2]^-1 * h[2] h[2] h[1] + q[1,2] * h[1,2] h[2] + h[2,[1,2]]")


def test_truncation_drops_large_trees():
    ctx = Context(1, 2)
    assert normal_order([2, 1, 2], 1, ctx) == env(ctx, "q[1,2]^-1 * h[2] h[2] h[1] + q[1,2] * h[1,2] h[2]")
    assert normal_order([1, 2], 1, Context(1, 1)) == env(Context(1, 1), "q[1,2]^-1 * h[2] h[1]")


def test_canonicalization_conventions(ctx13):
    assert canonicalize_tree((1, 1), ctx13).is_zero
    ct = canonicalize_tree((2, 1), ctx13)
    assert ct.tree == (1, 2) and ct.coeff == -q12
    ct = canonicalize_tree((1, (2, 1)), ctx13)
    assert ct.tree == (1, (1, 2)) and ct.coeff == -q12
    assert canonicalize_tree((1, (1, (1, 2))), ctx13).is_zero  # beyond N


def test_parse_examples(ctx23):
    assert sh(ctx23, "h[[1,2],3]") == ShadowElement.generator(ctx23, ((1, 2), 3))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert not sh(ctx23, "h[1,1]")
    assert any(issubclass(w.category, TruncationWarning) for w in caught)
    with pytest.raises(ElementSyntaxError) as e:
        sh(ctx23, "h[1] + * h[2]")
    assert e.value.position > 0
    with pytest.raises(TreeError):
        sh(ctx23, "h[5]")


@given(st.data())
def test_format_parse_roundtrip(data):
    ctx = Context(1, 3)
    x = data.draw(shadow_st(ctx, 3, 3))
    assert sh(ctx, format_element(x)) == x
    y = normal_order(data.draw(st.lists(st.sampled_from(enumerate_positive(1, 3)), max_size=3)), 2, ctx)
    assert env(ctx, format_element(y)) == y
    assert element_from_json(element_to_json(x), ctx) == x


def test_shadow_is_q_commutative(ctx13):
    a, b = ShadowElement.generator(ctx13, 1), ShadowElement.generator(ctx13, 2)
    assert shadow_mul(a, b) == shadow_mul(b, a).scale(q12 ** -1)
    assert swap_coeff((1,), (2,)) == q12  # h2 h1 = q[1,2] h1 h2


@given(st.data())
def test_shadow_associative_and_unital(data):
    ctx = Context(2, 2)
    a, b, c = (data.draw(shadow_st(ctx)) for _ in range(3))
    assert shadow_mul(shadow_mul(a, b), c) == shadow_mul(a, shadow_mul(b, c))
    assert shadow_mul(ShadowElement.unit(ctx), a) == a


@given(st.data())
def test_envelope_associative(data):
    ctx = Context(1, 3)
    gens = enumerate_positive(1, 3)
    xs = [normal_order(data.draw(st.lists(st.sampled_from(gens), max_size=3)), 1, ctx) for _ in range(3)]
    a, b, c = xs
    assert envelope_mul(envelope_mul(a, b), c) == envelope_mul(a, envelope_mul(b, c))


def test_basis_monomials_are_non_increasing(ctx13):
    assert is_monomial(((1, 2), 2, 1), ctx13)
    assert not is_monomial((1, 2), ctx13)
    with pytest.raises(ValueError):
        ShadowElement.basis(ctx13, (1, 2))


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        ShadowElement.generator(Context(1, 3), 1) + ShadowElement.generator(Context(1, 2), 1)


def test_specialized_context_agrees_with_evaluation():
    spec = Specialization({(1, 2): 3})
    sym = normal_order([2, 1, 2], 1, Context(1, 3))
    num = normal_order([2, 1, 2], 1, Context(1, 3, spec))
    assert sym.evaluate(spec) == num


# -- rewriting strategies -----------------------------------------------------------------


@pytest.mark.parametrize("seed", range(5))
def test_strategies_agree_without_three_distinct_letters(seed):
    # d = 1 and N = 3: every overlap resolves
    rng = random.Random(seed)
    ctx = Context(1, 3)
    gens = enumerate_positive(1, 3)
    for _ in range(20):
        w = [rng.choice(gens) for _ in range(rng.randint(2, 5))]
        fast = normal_order(w, 1, ctx)
        for strategy in ("leftmost", "rightmost", "random"):
            stats = RewriteStats(strategy)
            assert normal_order(w, 1, ctx, strategy=strategy, rng=rng, stats=stats) == fast
            assert stats.max_chain <= chain_bound(len(w))


def test_overlap_with_three_letters_does_not_resolve():
    # Frozen from the independent oracle.  The two reductions of h1 h2 h3 differ by
    # a q-Jacobi combination of three-leaf trees that the defining relations never impose.
    ctx = Context(2, 3)
    common = "h[1,2] h[3] + q[2,3]^-1 * h[1,3] h[2] + q[1,2]^-1 q[1,3]^-1 * h[2,3] h[1]" \
             " + q[1,2]^-1 q[1,3]^-1 q[2,3]^-1 * h[3] h[2] h[1]"
    left = normal_order([1, 2, 3], 1, ctx, strategy="leftmost")
    right = normal_order([1, 2, 3], 1, ctx, strategy="rightmost")
    assert left == env(ctx, common + " + q[1,2]^-1 * h[2,[1,3]]")
    assert right == env(ctx, common + " + h[1,[2,3]] + q[1,3]^-1 q[2,3]^-1 * h[3,[1,2]]")
    assert normal_order([1, 2, 3], 1, ctx) == left


def test_overlap_at_four_leaves_does_not_resolve():
    ctx = Context(1, 4)
    left = normal_order([1, 2, (1, 2)], 1, ctx, strategy="leftmost")
    right = normal_order([1, 2, (1, 2)], 1, ctx, strategy="rightmost")
    assert left - right == env(ctx, "q[1,2]^-1 * h[2,[1,[1,2]]] - h[1,[2,[1,2]]]")


def test_chain_bound_grows_with_length():
    assert all(chain_bound(n) < chain_bound(n + 1) for n in range(1, 6))
