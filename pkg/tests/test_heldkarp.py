import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathtsp.heldkarp import HeldKarpSpec, separate_point, solve_held_karp
from pathtsp.instance import EdgeVector, generate_instance
from pathtsp.lp import INFEASIBLE, EQ
from pathtsp.oracles import exact_path_tsp, materialized_held_karp, verify_in_phk
from strategies import collinear, endpoint_instances, instances, two_vertex

H = Fraction(1, 2)


def test_two_vertex_relaxation():
    res = solve_held_karp(HeldKarpSpec.top_level(two_vertex()))
    assert res.value == 5 and res.x == EdgeVector({(0, 1): 1})


def test_singleton_zero_vector():
    inst = collinear()
    res = solve_held_karp(HeldKarpSpec(inst, 1 << 2, 2, 2))
    assert res.feasible and res.value == 0 and len(res.x) == 0


def test_u_equals_v_on_two_vertices_infeasible():
    inst = collinear()
    assert solve_held_karp(HeldKarpSpec(inst, 0b0110, 1, 1)).status == INFEASIBLE


def test_collinear_relaxation_is_the_path():
    inst = collinear()
    res = solve_held_karp(HeldKarpSpec.top_level(inst))
    assert res.value == 3
    assert res.x == EdgeVector.of_path([0, 1, 2, 3])
    assert materialized_held_karp(inst)[0] == 3


def test_spec_validation():
    inst = collinear()
    with pytest.raises(ValueError):
        HeldKarpSpec(inst, 0b0011, 0, 3)
    with pytest.raises(ValueError):
        HeldKarpSpec(inst, 0b1111, 0, 3, (0b1000,))


def test_side_cut_singleton_infeasible():
    # B ∩ W = {u}: degree of u is 1, load 3 impossible
    inst = collinear()
    assert solve_held_karp(HeldKarpSpec(inst, 0b1111, 0, 3, (0b0001,))).status == INFEASIBLE
    assert solve_held_karp(HeldKarpSpec(inst, 0b1111, 0, 3, (0b0111,))).status == INFEASIBLE


def test_side_cut_forces_load_three():
    inst = generate_instance("random-euclidean", 6, 3)
    spec = HeldKarpSpec(inst, 0b111111, 0, 5, (0b000011,))
    res = solve_held_karp(spec)
    assert res.feasible and res.x.load(0b000011) >= 3
    plain = solve_held_karp(HeldKarpSpec.top_level(inst))
    assert res.value >= plain.value
    assert separate_point(spec, res.x) is None


def test_separate_zero_vector_hits_degree_of_u():
    inst = collinear()
    row = separate_point(HeldKarpSpec.top_level(inst), EdgeVector())
    assert row.relation == EQ and row.rhs == 1 and all(0 in e for e in row.coeffs)


def test_separate_half_half_is_feasible():
    inst = collinear()
    x = (EdgeVector.of_path([0, 1, 2, 3]) + EdgeVector.of_path([0, 2, 1, 3])).scale(H)
    assert separate_point(HeldKarpSpec.top_level(inst), x) is None
    assert verify_in_phk(inst, x) is None


def test_separate_reports_subtour():
    inst = generate_instance("random-euclidean", 6, 0)
    # path 0-5 plus a disjoint triangle on 2,3,4 and vertex 1 attached twice
    x = EdgeVector.indicator([(0, 1), (1, 5), (2, 3), (3, 4), (2, 4)])
    row = separate_point(HeldKarpSpec.top_level(inst), x)
    assert row is not None and not row.satisfied_by(dict(x.items()))


def test_support_outside_ground_set():
    inst = collinear()
    row = separate_point(HeldKarpSpec(inst, 0b0111, 0, 2), EdgeVector.indicator([(0, 3), (1, 2)]))
    assert row is not None and (0, 3) in row.coeffs


@settings(max_examples=25, deadline=None)
@given(endpoint_instances(min_n=3, max_n=8))
def test_optimum_is_feasible_and_below_opt(inst):
    res = solve_held_karp(HeldKarpSpec.top_level(inst))
    assert res.feasible
    assert verify_in_phk(inst, res.x) is None
    assert res.value <= exact_path_tsp(inst)[0]
    assert len(res.x) <= 2 * inst.n - 3


@settings(max_examples=15, deadline=None)
@given(instances(min_n=3, max_n=7), st.data())
def test_subproblem_feasible_and_matches_materialized(inst, data):
    W = data.draw(st.integers(1, 2 ** inst.n - 1).filter(lambda m: m.bit_count() >= 2))
    verts = [v for v in range(inst.n) if W >> v & 1]
    u = data.draw(st.sampled_from(verts))
    v = data.draw(st.sampled_from([w for w in verts if w != u]))
    res = solve_held_karp(HeldKarpSpec(inst, W, u, v))
    assert verify_in_phk(inst, res.x, W, u, v) is None
    assert res.value == materialized_held_karp(inst, W, u, v)[0]


@settings(max_examples=15, deadline=None)
@given(instances(min_n=3, max_n=7))
def test_hamiltonian_paths_are_feasible(inst):
    spec = HeldKarpSpec.top_level(inst)
    mid = [w for w in range(inst.n) if w not in (inst.s, inst.t)]
    for perm in itertools.permutations(mid):
        x = EdgeVector.of_path([inst.s, *perm, inst.t])
        assert separate_point(spec, x) is None


@settings(max_examples=15, deadline=None)
@given(instances(min_n=4, max_n=8))
def test_resolving_with_generated_rows_gives_same_value(inst):
    from pathtsp.lp import LinearProgram, solve
    res = solve_held_karp(HeldKarpSpec.top_level(inst))
    lp = LinearProgram({e: inst.lengths[e[0]][e[1]] for e in inst.edges()})
    for row in res.rows:
        lp.add_row(row.coeffs, row.relation, row.rhs)
    assert solve(lp).value == res.value
