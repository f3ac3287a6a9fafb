"""
The shortest B-good point
=========================

y is a Held-Karp point that, on every cut of B = B(x*), has load >= 3 or is
crossed by one edge of value 1. It is assembled along a shortest path in the
auxiliary digraph.
"""
# %%
from pathtsp import (HeldKarpSpec, build_aux_graph, enumerate_b_cuts, generate_instance,
                     shortest_bgood_point, solve_held_karp)
from pathtsp.instance import Cut
from pathtsp.oracles import verify_bgood, verify_in_phk

two = generate_instance("graph-metric", 2, 0)
print(build_aux_graph(two, [Cut.of([0])]).dump())

# %%
inst = generate_instance("random-euclidean", 11, seed=2)
x = solve_held_karp(HeldKarpSpec.top_level(inst)).x
family = [c.cut for c in enumerate_b_cuts(inst, x)]
res = shortest_bgood_point(inst, family)
print(f"|B| = {len(family)}, l(x*) = {x.length(inst)}, d* = {res.d_star}")
print(f"arc programs solved: {res.lp_solves} (bound {(len(family) * inst.n + 2) ** 2})")
for cut, e in res.integral_one_cuts:
    print("  integral edge", e, "on", cut)

# %%
# The lazy search and the exhaustive topological pass agree.
dag = shortest_bgood_point(inst, family, strategy="dag")
print(dag.d_star == res.d_star, dag.lp_solves)
print(verify_in_phk(inst, res.y), verify_bgood(inst, res.y, family))
