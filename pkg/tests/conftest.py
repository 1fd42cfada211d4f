import random

import pytest
from hypothesis import settings, strategies as st

from epoche.algebra import Context, ShadowElement, shadow_word
from epoche.polynomials import LaurentPolynomial, Specialization
from epoche.trees import enumerate_positive, unrank

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ctx13():
    return Context(1, 3)


@pytest.fixture
def ctx23():
    return Context(2, 3)


def ltrees_st(d=2, max_rank=400):
    return st.integers(1, max_rank).map(lambda k: unrank(k, d))


def positive_st(d=1, N=3):
    return st.sampled_from(enumerate_positive(d, N))


@st.composite
def laurent_st(draw, d=1, max_terms=3):
    pairs = [(i, j) for j in range(2, 2 * d + 1) for i in range(1, j)]
    p = LaurentPolynomial.const(0)
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {pr: draw(st.integers(-2, 2)) for pr in pairs}
        p = p + LaurentPolynomial.monomial(exps, draw(st.integers(-3, 3)))
    return p


@st.composite
def shadow_st(draw, ctx, max_terms=2, max_len=2):
    gens = enumerate_positive(ctx.d, ctx.N)
    x = ShadowElement.zero(ctx)
    for _ in range(draw(st.integers(1, max_terms))):
        m = draw(st.lists(st.sampled_from(gens), max_size=max_len))
        x = x + shadow_word(ctx, m, draw(st.integers(-3, 3)))
    return x


def random_spec(d, seed):
    return Specialization.random(d, random.Random(seed))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
