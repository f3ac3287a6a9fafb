"""
Cuts of load below three
========================

The s-t cuts with x*-load < 3 are enumerated by brute force, or by random
contraction in the support graph augmented with a unit s-t edge.
"""
# %%
from pathtsp import HeldKarpSpec, generate_instance, solve_held_karp
from pathtsp.cuts import brute_b_cuts, contraction_b_cuts, contraction_trials, is_chain, narrow_cuts

inst = generate_instance("random-euclidean", 13, seed=18)
x = solve_held_karp(HeldKarpSpec.top_level(inst)).x
cuts = brute_b_cuts(inst, x)
for c in cuts:
    print(f"{str(c.load):>5}  {c.cut}")

# %%
print("narrow cuts form a chain:", is_chain(narrow_cuts(cuts)))
print("trials at n=13:", contraction_trials(13))
agree = sum(contraction_b_cuts(inst, x, seed=s) == cuts for s in range(20))
print(f"contraction matched brute force on {agree}/20 seeds")
