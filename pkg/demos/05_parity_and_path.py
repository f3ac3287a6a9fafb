"""
From y to a path
================

Spanning tree in supp(y), minimum join on the parity defect, Eulerian trail,
shortcut. The proof inequalities are printed along the way.
"""
# %%
from fractions import Fraction

from pathtsp import (HeldKarpSpec, enumerate_b_cuts, euler_shortcut, exact_path_tsp, generate_instance,
                     hoogeveen_baseline, min_q_join, mst_on_support, path_length, q_target,
                     shortest_bgood_point, solve_held_karp)
from pathtsp.oracles import verify_join_dominant

inst = generate_instance("graph-metric", 12, seed=6)
x = solve_held_karp(HeldKarpSpec.top_level(inst)).x
y = shortest_bgood_point(inst, [c.cut for c in enumerate_b_cuts(inst, x)]).y
tree = mst_on_support(inst, y)
q = q_target(inst, tree)
join = min_q_join(inst, q)
path = euler_shortcut(inst, tree, join)

lx, ly, lT = x.length(inst), y.length(inst), tree.length(inst)
lJ = sum((inst.lengths[a][b] for a, b in join), Fraction(0))
opt, _ = exact_path_tsp(inst)
print(f"l(T) = {lT} <= l(y) = {ly} <= OPT = {opt}")
print(f"l(J) = {lJ} <= (l(x*) + l(y))/4 = {(lx + ly) / 4}")
print("z/2 dominates the join polytope:", verify_join_dominant(inst, (x + y).scale(Fraction(1, 4)), q.q) is None)
print(f"path {path}, length {path_length(inst, path)}, ratio {float(path_length(inst, path) / opt):.4f}")

# %%
base = hoogeveen_baseline(inst)
print(f"baseline length {path_length(inst, base)}, ratio {float(path_length(inst, base) / opt):.4f}")
