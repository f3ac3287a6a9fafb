import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathtsp.instance import EdgeVector, path_length
from pathtsp.oracles import brute_min_perfect_matching, exact_path_tsp
from pathtsp.parity import (ParityError, ParityTarget, SpanningTree, euler_shortcut, hoogeveen_baseline,
                            min_q_join, minimum_spanning_tree, mst_on_support, q_target)
from strategies import collinear, explicit, instances, two_vertex

H = Fraction(1, 2)


def test_mst_on_path_support():
    inst = collinear()
    tree = mst_on_support(inst, EdgeVector.of_path([0, 1, 2, 3]))
    assert tree.edges == ((0, 1), (1, 2), (2, 3)) and tree.length(inst) == 3


def test_mst_on_half_half_support():
    inst = collinear()
    y = (EdgeVector.of_path([0, 1, 2, 3]) + EdgeVector.of_path([0, 2, 1, 3])).scale(H)
    tree = mst_on_support(inst, y)
    support = set(y.support())
    assert set(tree.edges) <= support
    # best of all spanning trees inside the 5-edge support
    best = None
    for combo in itertools.combinations(sorted(support), 3):
        if len({w for e in combo for w in e}) == 4:
            parent = list(range(4))
            def find(a):
                while parent[a] != a:
                    a = parent[a]
                return a
            ok = True
            for a, b in combo:
                ra, rb = find(a), find(b)
                if ra == rb:
                    ok = False
                parent[ra] = rb
            if ok:
                cost = sum(inst.lengths[a][b] for a, b in combo)
                best = cost if best is None else min(best, cost)
    assert tree.length(inst) == best <= y.length(inst) == 4


def test_mst_two_vertex_and_disconnected():
    assert mst_on_support(two_vertex(), EdgeVector({(0, 1): 1})).edges == ((0, 1),)
    with pytest.raises(ParityError):
        mst_on_support(collinear(), EdgeVector.indicator([(0, 1), (2, 3)]))


def test_join_examples():
    inst = collinear((0, 1, 3, 6))
    assert min_q_join(inst, ParityTarget(frozenset())) == []
    join = min_q_join(inst, ParityTarget({0, 1, 2, 3}))
    assert join == [(0, 1), (2, 3)]
    assert sum(inst.lengths[a][b] for a, b in join) == 4
    assert min_q_join(inst, {1, 3}) == [(1, 3)]
    with pytest.raises(ParityError):
        ParityTarget({0, 1, 2})
    with pytest.raises(ParityError):
        min_q_join(inst, [0, 1, 2])


def test_shortcut_examples():
    inst = collinear((0, 1, 2))
    assert euler_shortcut(inst, SpanningTree(((0, 1), (1, 2))), []) == (0, 1, 2)
    assert euler_shortcut(two_vertex(), SpanningTree(((0, 1),)), []) == (0, 1)
    assert path_length(two_vertex(), (0, 1)) == 5


def test_shortcut_star():
    # s=0, c=1, a=2, t=3; star at c, join {a,t}
    inst = explicit([[0, 1, 2, 2], [1, 0, 1, 1], [2, 1, 0, 2], [2, 1, 2, 0]])
    tree = SpanningTree(((0, 1), (1, 2), (1, 3)))
    # c has tree degree 3 and a has 1, so the parity defect is {c, a}
    assert q_target(inst, tree).q == {1, 2}
    with pytest.raises(ParityError):
        euler_shortcut(inst, tree, [(2, 3)])
    path = euler_shortcut(inst, tree, min_q_join(inst, q_target(inst, tree)))
    assert path == (0, 1, 2, 3)
    assert path_length(inst, path) == 4 <= tree.length(inst) + inst.lengths[1][2]


def test_shortcut_rejects_bad_parity():
    inst = collinear()
    with pytest.raises(ParityError):
        euler_shortcut(inst, SpanningTree(((0, 1), (1, 2), (1, 3))), [])


def test_hoogeveen_examples():
    assert hoogeveen_baseline(two_vertex()) == (0, 1)
    assert hoogeveen_baseline(collinear()) == (0, 1, 2, 3)


def test_hoogeveen_random_euclidean_10():
    from pathtsp.instance import generate_instance
    inst = generate_instance("random-euclidean", 10, 3)
    opt, _ = exact_path_tsp(inst)
    assert path_length(inst, hoogeveen_baseline(inst)) <= Fraction(5, 3) * opt


@settings(max_examples=40, deadline=None)
@given(instances(min_n=2, max_n=11), st.data())
def test_join_matches_brute_force(inst, data):
    k = data.draw(st.integers(0, min(10, inst.n) // 2))
    q = data.draw(st.lists(st.integers(0, inst.n - 1), min_size=2 * k, max_size=2 * k, unique=True))
    join = min_q_join(inst, set(q))
    cost = sum((inst.lengths[a][b] for a, b in join), Fraction(0))
    assert cost == brute_min_perfect_matching(inst, q)[0]
    assert sorted(w for e in join for w in e) == sorted(q)


@settings(max_examples=40, deadline=None)
@given(instances(min_n=2, max_n=11))
def test_hoogeveen_is_valid_and_bounded(inst):
    tree = minimum_spanning_tree(inst)
    q = q_target(inst, tree)
    assert len(q.q) % 2 == 0
    join = min_q_join(inst, q)
    path = euler_shortcut(inst, tree, join)
    assert path == hoogeveen_baseline(inst)
    length = path_length(inst, path)
    assert length <= tree.length(inst) + sum((inst.lengths[a][b] for a, b in join), Fraction(0))
    assert length <= Fraction(5, 3) * exact_path_tsp(inst)[0]
