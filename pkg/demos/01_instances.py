"""
Metric instances and exact lengths
==================================

Instances are complete graphs with rational lengths. Euclidean points are
rounded the TSPLIB way, which can break the triangle inequality; the loader
refuses such input unless asked to take the metric closure.
"""
# %%
from fractions import Fraction

from pathtsp import generate_instance, parse_instance, path_length
from pathtsp.instance import InstanceError

text = """NAME : line
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
NODE_COORD_SECTION
1 0 0
2 1 0
3 2 0
4 3 0
EOF
"""
inst = parse_instance(text, 0, 3)
print(inst.lengths[0][3], path_length(inst, (0, 1, 2, 3)), path_length(inst, (0, 2, 1, 3)))

# %%
# A matrix that violates the triangle inequality names the offending triple.
bad = """DIMENSION : 3
EDGE_WEIGHT_TYPE : EXPLICIT
EDGE_WEIGHT_FORMAT : UPPER_ROW
EDGE_WEIGHT_SECTION
1 10
1
EOF
"""
try:
    parse_instance(bad, 0, 2)
except InstanceError as err:
    print("rejected:", err)
print("closure:", parse_instance(bad, 0, 2, metric_closure_fix=True).lengths[0][2])

# %%
# Generators are seeded and always metric.
for family in ("euclidean-grid", "random-euclidean", "graph-metric"):
    g = generate_instance(family, 9, seed=1)
    print(family, g.n, g.s, g.t, sum(g.lengths[0], Fraction(0)))
