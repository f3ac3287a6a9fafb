from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathtsp.flow import CapGraph, global_min_cut, min_st_cut
from pathtsp.oracles import brute_min_st_cut

H = Fraction(1, 2)


def test_single_edge():
    assert min_st_cut(CapGraph(2, [(0, 1, 5)]), 0, 1) == (5, frozenset({0}))


def test_diamond_value_one():
    # s=0, x=1, y=2, t=3
    g = CapGraph(4, [(0, 1, H), (0, 2, H), (1, 2, 1), (1, 3, H), (2, 3, H)])
    value, side = min_st_cut(g, 0, 3)
    assert value == 1
    assert g.cut_value(side) == 1
    assert brute_min_st_cut(4, g.edges, 0, 3)[0] == 1


def test_disconnected_terminals():
    g = CapGraph(4, [(0, 1, 2), (2, 3, 1)])
    assert min_st_cut(g, 0, 3) == (0, frozenset({0, 1}))


def test_same_terminal_rejected():
    with pytest.raises(ValueError):
        min_st_cut(CapGraph(2, [(0, 1, 1)]), 1, 1)


@pytest.mark.parametrize("edges", [[(0, 0, 1)], [(0, 5, 1)], [(0, 1, 0)], [(0, 1, -1)]])
def test_bad_graphs(edges):
    with pytest.raises(ValueError):
        CapGraph(2, edges)


def test_global_min_cut_examples():
    assert global_min_cut(CapGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))[0] == 2
    assert global_min_cut(CapGraph(3, [(0, 1, 3), (1, 2, 1)])) == (1, frozenset({2}))
    assert global_min_cut(CapGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]))[0] == 2
    with pytest.raises(ValueError):
        global_min_cut(CapGraph(1, []))


def test_residual_side_is_inclusion_minimal():
    # two minimum cuts of value 1: {0} and {0,1}
    g = CapGraph(3, [(0, 1, 1), (1, 2, 1)])
    assert min_st_cut(g, 0, 2)[1] == frozenset({0})


@st.composite
def cap_graphs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n))
    caps = st.fractions(min_value=Fraction(1, 6), max_value=4, max_denominator=6)
    edges = [(a, b, draw(caps)) for a, b in chosen]
    return CapGraph(n, edges)


@settings(max_examples=60, deadline=None)
@given(cap_graphs(), st.data())
def test_matches_brute_force(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1).filter(lambda v: v != a))
    value, side = min_st_cut(g, a, b)
    assert a in side and b not in side
    assert g.cut_value(side) == value
    assert value == brute_min_st_cut(g.n, g.edges, a, b)[0]
    assert min_st_cut(g, b, a)[0] == value


@settings(max_examples=40, deadline=None)
@given(cap_graphs(max_n=9))
def test_global_min_cut_matches_brute(g):
    value, side = global_min_cut(g)
    assert 0 < len(side) < g.n and 0 not in side
    assert g.cut_value(side) == value
    best = min(g.cut_value({v for v in range(g.n) if m >> v & 1}) for m in range(1, 2 ** g.n - 1))
    assert value == best
