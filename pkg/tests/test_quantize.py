import itertools
from fractions import Fraction

from hypothesis import given, strategies as st

from epoche import quantize
from epoche.algebra import (Context, EnvelopeElement, ShadowElement, canonicalize_tree, envelope_mul,
                            shadow_mul, shadow_word, swap_coeff)
from epoche.polynomials import Specialization
from epoche.textio import parse_element
from epoche.trees import enumerate_positive

from conftest import random_spec, shadow_st


def sh(ctx, src):
    return parse_element(src, ctx)


def env(ctx, src):
    return parse_element(src, ctx, EnvelopeElement)


# -- frozen values from the independent sympy oracle ------------------------------------


def test_weyl_map_examples(ctx13):
    assert quantize.weyl_W(sh(ctx13, "h[2] h[1]")) == \
        env(ctx13, "h[2] h[1] + (q[1,2])/(1 + q[1,2]^2) * h[1,2]")
    assert quantize.weyl_W(sh(ctx13, "h[1,2] h[2]")) == \
        env(ctx13, "h[1,2] h[2] + (q[1,2])/(1 + q[1,2]^2) * h[2,[1,2]]")


def test_weyl_star_on_generators(ctx13):
    h1, h2 = sh(ctx13, "h[1]"), sh(ctx13, "h[2]")
    assert quantize.star_weyl(h1, h2) == sh(ctx13, "q[1,2]^-1 * h[2] h[1] + (q[1,2]^2)/(1 + q[1,2]^2) * h[1,2]")
    assert quantize.star_weyl(h2, h1) == sh(ctx13, "h[2] h[1] - (q[1,2])/(1 + q[1,2]^2) * h[1,2]")


def test_weyl_star_generator_times_monomial(ctx13):
    got = quantize.star_weyl(sh(ctx13, "h[1]"), sh(ctx13, "h[1,2] h[2]"))
    want = sh(ctx13, "q[1,2]^-2 * h[1,2] h[2] h[1] + (q[1,2]^2)/(1 + q[1,2]^2) * h[1,[1,2]] h[2]"
                     " + (2 q[1,2]^3 + q[1,2]^5)/(1 + 2 q[1,2]^2 + 2 q[1,2]^4 + q[1,2]^6) * h[1,2] h[1,2]")
    assert got == want


def test_normal_star_on_generators(ctx13):
    assert quantize.star_normal(sh(ctx13, "h[1]"), sh(ctx13, "h[2]")) == \
        sh(ctx13, "q[1,2]^-1 * h[2] h[1] + h[1,2]")
    assert quantize.star_normal(sh(ctx13, "h[2]"), sh(ctx13, "h[1]")) == sh(ctx13, "h[2] h[1]")


# -- normal quantization ------------------------------------------------------------------


@given(st.data())
def test_normal_star_associative_with_shadow_leading_term(data):
    ctx = Context(1, 3)
    a, b, c = (data.draw(shadow_st(ctx)) for _ in range(3))
    ab = quantize.star_normal(a, b)
    assert quantize.star_normal(ab, c) == quantize.star_normal(a, quantize.star_normal(b, c))
    if a.is_homogeneous() and b.is_homogeneous() and a and b:
        base = a.degrees()[0] + b.degrees()[0]
        assert ab.graded_component(base) == shadow_mul(a, b)


def test_normal_bracket_on_generators_is_concatenation():
    ctx = Context(1, 3)
    gens = [g for g in enumerate_positive(1, 3) if canonicalize_tree(g, ctx)]
    for g, h in itertools.product(gens, repeat=2):
        got = quantize.bracket_normal(ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h))
        assert got == shadow_word(ctx, [(g, h)])


@given(st.data())
def test_normal_bracket_q_antisymmetry(data):
    ctx = Context(1, 3)
    gens = enumerate_positive(1, 3)
    m1 = shadow_word(ctx, data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=2)))
    m2 = shadow_word(ctx, data.draw(st.lists(st.sampled_from(gens), min_size=1, max_size=2)))
    if not (m1 and m2):
        return
    (w1, _), = m1.items()
    (w2, _), = m2.items()
    lhs = quantize.bracket_normal(m1, m2)
    rhs = quantize.bracket_normal(m2, m1).scale(swap_coeff(w2, w1)).scale(-1)
    assert lhs == rhs


def test_closed_formula_matches_for_single_leaves():
    ctx = Context(1, 2)
    for a, b in [((1,), (2,)), ((2,), (1,)), ((1,), (2, 2))]:
        assert quantize.star_normal_closed(a, b, ctx, literal=False) == \
            quantize.star_normal(ShadowElement.basis(ctx, a), ShadowElement.basis(ctx, b))


def test_closed_formula_literal_overcounts_equal_factors():
    ctx = Context(1, 1)
    got = quantize.star_normal_closed((), (2, 2), ctx)
    assert got == sh(ctx, "2 * h[2] h[2]")


def test_closed_formula_misses_nested_trees():
    ctx = Context(1, 3)
    closed = quantize.star_normal_closed((1,), (2, 2), ctx, literal=False)
    rewriting = quantize.star_normal(sh(ctx, "h[1]"), sh(ctx, "h[2] h[2]"))
    assert rewriting - closed == sh(ctx, "q[1,2]^-1 * h[2,[1,2]]")


# -- q-Weyl quantization --------------------------------------------------------------------


@given(st.data())
def test_weyl_round_trip(data):
    ctx = Context(2, 3)
    a = data.draw(shadow_st(ctx, 2, 3))
    assert quantize.weyl_W_inverse(quantize.weyl_W(a)) == a
    x = quantize.weyl_W(a)
    assert quantize.weyl_W(quantize.weyl_W_inverse(x)) == x


@given(st.data())
def test_weyl_star_associative(data):
    ctx = Context(1, 3)
    a, b, c = (data.draw(shadow_st(ctx)) for _ in range(3))
    star = quantize.star_weyl
    assert star(star(a, b), c) == star(a, star(b, c))


@given(st.data())
def test_recursive_formula_agrees(data):
    ctx = Context(1, 3)
    a, b = data.draw(shadow_st(ctx)), data.draw(shadow_st(ctx))
    assert quantize.star_weyl_recursive(a, b) == quantize.star_weyl(a, b)


def test_all_ones_weyl_is_symmetrization():
    ctx = Context(1, 3, Specialization.all_ones())
    x = quantize.weyl_W(sh(ctx, "h[2] h[1]"))
    assert x == env(ctx, "h[2] h[1] + 1/2 * h[1,2]")


def test_semiclassical_coefficient_at_all_ones():
    ctx = Context(2, 3, Specialization.all_ones())
    gens = enumerate_positive(2, 2)
    for g, h in itertools.product(gens, repeat=2):
        got = quantize.bracket_weyl(ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h))
        assert got == shadow_word(ctx, [(h, g)], Fraction(-1, 2))


def test_specialized_star_agrees_with_symbolic():
    spec = random_spec(1, 3)
    sym, num = Context(1, 3), Context(1, 3, spec)
    a, b = "h[1] + 2 * h[1,2]", "h[2] h[2] - h[1]"
    assert quantize.star_weyl(sh(sym, a), sh(sym, b)).evaluate(spec) == quantize.star_weyl(sh(num, a), sh(num, b))


def test_degree_jumps():
    ctx = Context(1, 3)
    x = quantize.star_weyl(sh(ctx, "h[1]"), sh(ctx, "h[2]"))
    jumps = quantize.degree_jumps(x, 0)
    assert set(jumps) == {0, 1}
    assert jumps[1] == quantize.bracket_weyl(sh(ctx, "h[1]"), sh(ctx, "h[2]"))


# -- distortion ------------------------------------------------------------------------------


def test_distortion_witness_at_three_leaves():
    ctx = Context(1, 3)
    rep = quantize.distortion_witness(ctx, [random_spec(1, s) for s in range(3)])
    assert rep.found_nonlinearity and rep.u == (2,) and rep.generator == (1, 2)
    assert len(rep.modes_confirmed) == 4
    assert rep.found_lambda_witness
    left, right = quantize.nonlinearity_defect(ctx, (1, 2), (2,))
    assert left - right == env(ctx, "(q[1,2])/(1 + q[1,2]^2) * h[2,[1,2]]")


def test_two_leaves_distortion_needs_two_letters():
    # single-letter u commute through; u = h2 h1 already shows a q-dependent defect
    ctx = Context(1, 2)
    for u in [(1,), (2,), (1, 1), (2, 2)]:
        left, right = quantize.nonlinearity_defect(ctx, (1, 2), u)
        assert left == right
    left, right = quantize.nonlinearity_defect(ctx, (1, 2), (2, 1))
    assert left - right == env(ctx, "(q[1,2]^3 - q[1,2]^5)/(1 + 2 q[1,2]^2 + 2 q[1,2]^4 + q[1,2]^6) * h[1,2] h[1,2]")
    ones = Context(1, 2, Specialization.all_ones())
    left, right = quantize.nonlinearity_defect(ones, (1, 2), (2, 1))
    assert left == right


def test_envelope_generator_product_matches(ctx13):
    h = EnvelopeElement.generator(ctx13, 1)
    assert envelope_mul(h, EnvelopeElement.generator(ctx13, 2)) == env(ctx13, "h[1] h[2]")
