"""Path TSP 3/2-approximation with exact rational arithmetic and exhaustive audits."""

from .bgood import AuxArc, AuxDigraph, AuxNode, BGoodResult, NoBGoodPointError, arc_length, \
    build_aux_graph, shortest_bgood_point
from .cuts import CutEnumerationError, WeightedCut, enumerate_b_cuts, verify_cut_count_bound
from .flow import CapGraph, global_min_cut, min_st_cut
from .heldkarp import HeldKarpResult, HeldKarpSpec, separate_point, solve_held_karp
from .instance import Cut, EdgeVector, InstanceError, MetricInstance, format_instance, \
    generate_instance, parse_instance, path_length
from .lp import LinearProgram, LPResourceError, LPSolution, Row, solve, solve_with_separation
from .oracles import exact_path_tsp, permutation_path_tsp, verify_bgood, verify_in_phk, \
    verify_join_dominant
from .parity import SpanningTree, ParityTarget, euler_shortcut, hoogeveen_baseline, min_q_join, \
    mst_on_support, q_target
from .pipeline import SolveOptions, SolveReport, run_batch, run_pipeline

__version__ = "0.1.0"
