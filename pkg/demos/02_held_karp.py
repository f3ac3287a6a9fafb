"""
The Held-Karp path relaxation
=============================

The relaxation is solved with an exact simplex. Degree rows are explicit;
cut rows are generated on demand by max-flow oracles.
"""
# %%
from pathtsp import HeldKarpSpec, exact_path_tsp, generate_instance, solve_held_karp
from pathtsp.oracles import materialized_held_karp, verify_in_phk

inst = generate_instance("random-euclidean", 9, seed=4)
res = solve_held_karp(HeldKarpSpec.top_level(inst))
opt, path = exact_path_tsp(inst)
print(f"l(x*) = {res.value}  OPT = {opt}  gap = {float(opt / res.value):.4f}")
print(f"{res.rounds} separation rounds, {res.pivots} pivots, {len(res.x)} support edges (2n-3 = {2 * inst.n - 3})")

# %%
# Fractional entries are exact.
for e, v in sorted(res.x.items()):
    if v.denominator > 1:
        print(e, v)

# %%
# Same value from the LP with all 2^(n-1) cut rows written out, and the point
# passes both polytope descriptions.
print(materialized_held_karp(inst)[0] == res.value, verify_in_phk(inst, res.x))

# %%
# Sub-relaxations: ground set, endpoints and side cuts that need load >= 3.
W = 0b000111111
sub = solve_held_karp(HeldKarpSpec(inst, W, 0, 5))
side = solve_held_karp(HeldKarpSpec(inst, W, 0, 5, (0b000000011,)))
print(sub.value, side.value, side.x.load(0b000000011))
