import itertools

import pytest
from hypothesis import given, strategies as st

from epoche.trees import (LEAF, TreeError, TreeSyntaxError, catalan, compare_ltrees, compose, concat,
                          enumerate_positive, format_shape, format_tree, is_positive, label, ltrees,
                          parse_shape, parse_tree, precedes, rank, shape_count, shape_rank, shape_unrank,
                          shapes, size, to_dot, unrank, word, Ordering)

from conftest import ltrees_st


def test_catalan_small_values():
    assert [catalan(m) for m in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]


@pytest.mark.parametrize("n", range(1, 9))
def test_shape_enumeration_matches_catalan(n):
    ss = shapes(n)
    assert len(ss) == catalan(n - 1) == shape_count(n)
    assert len(set(ss)) == len(ss)
    assert all(size(s) == n for s in ss)


def test_three_and_four_leaf_counts():
    assert len(shapes(3)) == 2
    assert len(shapes(4)) == 5
    assert [format_shape(s) for s in shapes(3)] == ["(*,(*,*))", "((*,*),*)"]


def test_shape_order_by_size_then_branches():
    # smaller trees come first; equal sizes compare left branches, then right ones
    assert shapes(3)[0] == (LEAF, (LEAF, LEAF))
    flat = [s for n in range(1, 6) for s in shapes(n)]
    assert [shape_rank(s) for s in shapes(5)] == list(range(14))
    assert all(shape_unrank(size(s), shape_rank(s)) == s for s in flat)


def test_rank_examples():
    # d = 1: two leaves, then four two-leaf trees [1,1] < [1,2] < [2,1] < [2,2]
    assert [format_tree(unrank(k, 1)) for k in range(1, 7)] == ["1", "2", "[1,1]", "[1,2]", "[2,1]", "[2,2]"]
    assert rank((1, 2), 1) == 4
    assert rank((1, (1, 2)), 1) == 8
    assert rank(((1, 2), 1), 1) == 6 + 8 + 3


@given(st.integers(1, 2), st.integers(1, 5000))
def test_unrank_then_rank(d, k):
    assert rank(unrank(k, d), d) == k


@given(ltrees_st(2, 20000), ltrees_st(2, 20000))
def test_rank_monotone_in_order(a, b):
    assert (rank(a, 2) < rank(b, 2)) == precedes(a, b)


@given(ltrees_st(), ltrees_st(), ltrees_st())
def test_order_is_total_and_transitive(a, b, c):
    assert compare_ltrees(a, b) == -compare_ltrees(b, a) or a == b
    assert (compare_ltrees(a, b) == Ordering.EQUAL) == (a == b)
    if precedes(a, b) and precedes(b, c):
        assert precedes(a, c)


def test_positive_trees_small():
    assert [format_tree(t) for t in enumerate_positive(1, 3)] == ["1", "2", "[1,2]", "[1,[1,2]]", "[2,[1,2]]"]
    assert is_positive((1, (1, 2)))
    assert not is_positive((2, 1))
    assert not is_positive(((1, 2), 1))  # a leaf precedes every larger tree
    assert not is_positive((1, 1))


@pytest.mark.parametrize("d,N", [(1, 4), (2, 3), (2, 4)])
def test_positive_enumeration_agrees_with_filter(d, N):
    brute = [t for n in range(1, N + 1) for t in ltrees(d, n) if is_positive(t)]
    assert sorted(brute, key=lambda t: rank(t, d)) == list(enumerate_positive(d, N))


def test_positive_subtrees_are_positive():
    for t in enumerate_positive(2, 4):
        if not isinstance(t, int):
            assert is_positive(t[0]) and is_positive(t[1]) and precedes(t[0], t[1])


def test_concat_and_compose():
    assert concat(1, (1, 2)) == (1, (1, 2))
    assert compose((LEAF, LEAF), (0, 1), [3, (1, 2)]) == (3, (1, 2))
    assert compose(((LEAF, LEAF), LEAF), (2, 0, 1), [1, 2, 3]) == ((3, 1), 2)
    with pytest.raises(TreeError):
        compose((LEAF, LEAF), (0, 0), [1, 2])
    assert word(label(shapes(3)[1], [4, 1, 2])) == (4, 1, 2)


@given(ltrees_st())
def test_parse_format_roundtrip(t):
    assert parse_tree(format_tree(t)) == t


def test_parse_errors_have_positions():
    with pytest.raises(TreeSyntaxError) as e:
        parse_tree("[1,2")
    assert e.value.position == 4
    with pytest.raises(TreeSyntaxError):
        parse_tree("[1,2]]")
    assert parse_shape("((*,*),*)") == shapes(3)[1]


def test_dot_output():
    dot = to_dot((1, 2))
    assert dot.startswith("digraph tree {") and dot.endswith("}")
    assert dot.count("->") == 2


def test_rank_rejects_out_of_range_labels():
    with pytest.raises(TreeError):
        rank((1, 3), 1)
    with pytest.raises(ValueError):
        unrank(0, 1)


def test_all_trees_at_size_three_are_distinct_and_ordered():
    ts = list(ltrees(1, 3))
    assert len(ts) == 2 * 8
    assert all(precedes(a, b) for a, b in zip(ts, ts[1:]))
    assert len(set(itertools.chain(ts))) == len(ts)
