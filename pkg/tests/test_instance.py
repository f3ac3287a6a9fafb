from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pathtsp.instance import (Cut, EdgeVector, InstanceError, euc_2d, format_instance, generate_instance,
                              metric_closure, parse_instance, path_length, triangle_violation)
from strategies import collinear, collinear4_parsed, instances, two_vertex


def explicit_text(matrix, fmt="FULL_MATRIX"):
    n = len(matrix)
    if fmt == "FULL_MATRIX":
        body = [" ".join(map(str, row)) for row in matrix]
    else:
        body = [" ".join(str(matrix[a][b]) for b in range(a + 1, n)) for a in range(n - 1)]
    return "\n".join([f"DIMENSION : {n}", "EDGE_WEIGHT_TYPE : EXPLICIT", f"EDGE_WEIGHT_FORMAT : {fmt}",
                      "EDGE_WEIGHT_SECTION", *body, "EOF"])


def test_parse_two_vertex_matrix():
    inst = parse_instance(explicit_text([[0, 5], [5, 0]]), 0, 1)
    assert inst.n == 2 and inst.lengths[0][1] == 5


def test_parse_collinear_euclidean():
    inst = collinear4_parsed()
    assert inst.lengths[0][3] == 3
    for a in range(4):
        for b in range(4):
            assert inst.lengths[a][b] == abs(a - b)


def test_triangle_violation_reports_witness():
    text = explicit_text([[0, 1, 10], [1, 0, 1], [10, 1, 0]])
    with pytest.raises(InstanceError, match=r"triangle inequality violated at \(0,1,2\)"):
        parse_instance(text, 0, 2)


def test_metric_closure_flag_repairs():
    text = explicit_text([[0, 1, 10], [1, 0, 1], [10, 1, 0]])
    inst = parse_instance(text, 0, 2, metric_closure_fix=True)
    assert inst.lengths[0][2] == 2


def test_upper_row_matches_full_matrix():
    m = [[0, 2, 3, 4], [2, 0, 2, 3], [3, 2, 0, 2], [4, 3, 2, 0]]
    a = parse_instance(explicit_text(m), 0, 3)
    b = parse_instance(explicit_text(m, "UPPER_ROW"), 0, 3)
    assert a.lengths == b.lengths


@pytest.mark.parametrize("s,t", [(0, 0), (0, 4), (-1, 1)])
def test_bad_endpoints(s, t):
    with pytest.raises(InstanceError):
        parse_instance(explicit_text([[0, 5], [5, 0]]), s, t)


@pytest.mark.parametrize("text", [
    "DIMENSION : 2\nEDGE_WEIGHT_TYPE : GEO\nEOF",
    "EDGE_WEIGHT_TYPE : EXPLICIT\nEOF",
    "DIMENSION : 3\nEDGE_WEIGHT_TYPE : EXPLICIT\nEDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1\nEOF",
    "DIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n1 1 1\nEOF",
    "garbage line\nDIMENSION : 2",
])
def test_malformed_documents(text):
    with pytest.raises(InstanceError):
        parse_instance(text, 0, 1)


def test_asymmetric_rejected():
    with pytest.raises(InstanceError, match="asymmetric"):
        parse_instance(explicit_text([[0, 1], [2, 0]]), 0, 1)


def test_euc_2d_rounding():
    assert euc_2d((0, 0), (2, 2)) == 3  # sqrt 8 = 2.83
    assert euc_2d((0, 0), (1, 1)) == 1  # sqrt 2 = 1.41
    assert euc_2d((0, 0), (Fraction(1, 2), 0)) == 1  # ties round up
    assert euc_2d((0, 0), (3, 4)) == 5


def test_generate_is_deterministic():
    assert generate_instance("random-euclidean", 8, 1) == generate_instance("random-euclidean", 8, 1)
    assert generate_instance("random-euclidean", 8, 1) != generate_instance("random-euclidean", 8, 2)


def test_graph_metric_is_metric():
    inst = generate_instance("graph-metric", 5, 7)
    assert triangle_violation(inst.lengths) is None
    assert all(x.denominator == 1 and x >= 1 for row in inst.lengths for x in row if x)


def test_grid_is_metric_closure_of_rounded_grid():
    inst = generate_instance("euclidean-grid", 9, 0)
    corner = inst.lengths[0][8]
    # rounded sqrt 8 = 3 exceeds the two-hop route through the centre (1 + 1)
    assert euc_2d((0, 0), (2, 2)) == 3
    assert corner == 2
    assert generate_instance("euclidean-grid", 9, 5).lengths == inst.lengths


def test_generate_rejects_small_and_unknown():
    with pytest.raises(InstanceError):
        generate_instance("random-euclidean", 1, 0)
    with pytest.raises(InstanceError):
        generate_instance("hexagonal", 5, 0)


def test_path_length_examples():
    assert path_length(two_vertex(), (0, 1)) == 5
    inst = collinear()
    assert path_length(inst, (0, 1, 2, 3)) == 3
    assert path_length(inst, (0, 2, 1, 3)) == 5
    with pytest.raises(ValueError):
        path_length(inst, (0, 1, 3, 2))
    with pytest.raises(ValueError):
        path_length(inst, (0, 1, 1, 3))


def test_format_round_trip():
    inst = generate_instance("random-euclidean", 7, 3)
    again = parse_instance(format_instance(inst), inst.s, inst.t)
    assert again.lengths == inst.lengths


def test_edge_vector_basics():
    x = EdgeVector({(1, 0): Fraction(1, 2), (1, 2): 1, (2, 3): 0})
    assert x.support() == [(0, 1), (1, 2)]
    assert x[(0, 1)] == x[(1, 0)] == Fraction(1, 2)
    assert x.load(Cut.of([0])) == Fraction(1, 2)
    assert x.degree(1) == Fraction(3, 2)
    with pytest.raises(ValueError):
        EdgeVector({(0, 1): -1})
    with pytest.raises(TypeError):
        EdgeVector({(0, 1): 0.5})


@settings(max_examples=40, deadline=None)
@given(instances(min_n=3, max_n=10), st.integers(0, 2 ** 10 - 1))
def test_cut_load_is_symmetric(inst, bits):
    import itertools
    order = list(range(inst.n))
    x = EdgeVector.of_path(order) + EdgeVector.indicator(itertools.combinations(order[:3], 2))
    full = (1 << inst.n) - 1
    bits &= full
    assert x.load(bits) == x.load(full & ~bits)


@settings(max_examples=40, deadline=None)
@given(instances(min_n=2, max_n=12))
def test_generated_instances_are_metric(inst):
    assert triangle_violation(inst.lengths) is None
    assert metric_closure(inst.lengths) == inst.lengths


@settings(max_examples=40, deadline=None)
@given(instances(min_n=3, max_n=9), st.randoms(use_true_random=False))
def test_reversed_path_same_length(inst, rnd):
    mid = [v for v in range(inst.n) if v not in (inst.s, inst.t)]
    rnd.shuffle(mid)
    order = [inst.s, *mid, inst.t]
    swapped = inst.with_endpoints(inst.t, inst.s)
    assert path_length(inst, order) == path_length(swapped, order[::-1])
    assert path_length(inst, order) >= inst.lengths[inst.s][inst.t]
