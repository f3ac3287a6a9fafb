from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathtsp.instance import Cut, EdgeVector, generate_instance
from pathtsp.oracles import (BGoodViolation, JoinViolation, PHKViolation, brute_min_perfect_matching,
                             exact_path_tsp, materialized_held_karp, permutation_path_tsp, verify_bgood,
                             verify_in_phk, verify_join_dominant)
from strategies import collinear, instances, two_vertex

H = Fraction(1, 2)


def half_half():
    return (EdgeVector.of_path([0, 1, 2, 3]) + EdgeVector.of_path([0, 2, 1, 3])).scale(H)


def test_exact_examples():
    assert exact_path_tsp(two_vertex()) == (5, (0, 1))
    assert exact_path_tsp(collinear()) == (3, (0, 1, 2, 3))
    inst = generate_instance("random-euclidean", 9, 2)
    assert exact_path_tsp(inst)[0] == permutation_path_tsp(inst)[0]
    with pytest.raises(ValueError):
        exact_path_tsp(generate_instance("graph-metric", 19, 0))


def test_exact_with_moved_endpoints():
    inst = collinear().with_endpoints(1, 2)
    opt, path = exact_path_tsp(inst)
    assert path[0] == 1 and path[-1] == 2 and opt == permutation_path_tsp(inst)[0] == 5


def test_bgood_examples():
    inst = collinear()
    fam = [Cut.of([0]), Cut.of([0, 1]), Cut.of([0, 2])]
    assert verify_bgood(inst, EdgeVector.of_path([0, 2, 1, 3]), fam) is None
    bad = verify_bgood(inst, half_half(), [Cut.of([0, 1])])
    assert isinstance(bad, BGoodViolation)
    # crossing support: 0-2 (1/2), 1-2 (1), 1-3 (1/2)
    assert bad.cut == Cut.of([0, 1]) and bad.load == 2
    assert bad.crossing == (((0, 2), H), ((1, 2), 1), ((1, 3), H))
    # load 1 spread over two edges is not integral
    split = EdgeVector({(0, 1): H, (0, 2): H, (1, 3): H, (2, 3): H, (1, 2): 1})
    assert verify_bgood(inst, split, [Cut.of([0])]).load == 1


def test_phk_examples():
    inst = collinear()
    assert verify_in_phk(inst, EdgeVector.of_path([0, 2, 1, 3])) is None
    bad = verify_in_phk(inst, EdgeVector())
    assert isinstance(bad, PHKViolation) and bad.constraint.startswith("degree 0")
    assert verify_in_phk(inst, EdgeVector(), 1 << 2, 2, 2) is None
    assert verify_in_phk(inst, EdgeVector(), 0b0110, 1, 1) is not None
    assert verify_in_phk(inst, half_half()) is None


def test_phk_subtour_caught_by_both_forms():
    inst = generate_instance("random-euclidean", 6, 0)
    x = EdgeVector.indicator([(0, 1), (1, 5), (2, 3), (3, 4), (2, 4)])
    bad = verify_in_phk(inst, x)
    assert bad is not None and "cut" in bad.constraint


def test_join_examples():
    inst = collinear()
    assert verify_join_dominant(inst, EdgeVector(), set()) is None
    cycle = EdgeVector({(0, 1): H, (1, 2): H, (2, 3): H, (0, 3): H})
    assert verify_join_dominant(inst, cycle, {0, 2}) is None
    bad = verify_join_dominant(inst, cycle.scale(H), {0, 2})
    assert isinstance(bad, JoinViolation) and bad.load == H
    with pytest.raises(ValueError):
        verify_join_dominant(inst, cycle, {0})


def test_materialized_examples():
    assert materialized_held_karp(two_vertex())[0] == 5
    assert materialized_held_karp(collinear())[0] == 3
    assert materialized_held_karp(collinear(), 0b0110, 1, 1) is None


def test_matching_brute_example():
    inst = collinear((0, 1, 3, 6))
    assert brute_min_perfect_matching(inst, [0, 1, 2, 3]) == (4, [(0, 1), (2, 3)])


@settings(max_examples=40, deadline=None)
@given(instances(min_n=2, max_n=8), st.data())
def test_exact_matches_permutations(inst, data):
    s = data.draw(st.integers(0, inst.n - 1))
    t = data.draw(st.integers(0, inst.n - 1).filter(lambda v: v != s))
    inst = inst.with_endpoints(s, t)
    opt, path = exact_path_tsp(inst)
    assert opt == permutation_path_tsp(inst)[0]
    assert path[0] == s and path[-1] == t and sorted(path) == list(range(inst.n))


@settings(max_examples=40, deadline=None)
@given(instances(min_n=3, max_n=8), st.randoms(use_true_random=False), st.integers(1, 4))
def test_descriptions_agree_on_mixtures(inst, rnd, k):
    # averages of Hamiltonian paths are feasible; perturbing one entry breaks a degree row
    mid = [v for v in range(inst.n) if v not in (inst.s, inst.t)]
    x = EdgeVector()
    for _ in range(k):
        rnd.shuffle(mid)
        x = x + EdgeVector.of_path([inst.s, *mid, inst.t])
    x = x.scale(Fraction(1, k))
    assert verify_in_phk(inst, x) is None
    e = rnd.choice(x.support())
    broken = EdgeVector({**dict(x.items()), e: x[e] + Fraction(1, 3)})
    assert verify_in_phk(inst, broken) is not None


@settings(max_examples=60, deadline=None)
@given(instances(min_n=3, max_n=6), st.data())
def test_descriptions_agree_on_random_vectors(inst, data):
    # arbitrary vectors: verify_in_phk raises if the two descriptions ever disagree
    pairs = list(inst.edges())
    vals = st.sampled_from([0, 0, Fraction(1, 3), H, Fraction(2, 3), 1])
    x = EdgeVector({e: data.draw(vals) for e in pairs})
    verify_in_phk(inst, x)
