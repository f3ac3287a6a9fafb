"""
Seeded batches
==============

One report per instance and mode, with a summary table. The same run is
available as ``pathtsp bench``.
"""
# %%
from pathtsp import SolveReport, run_batch
from pathtsp.pipeline import format_summary

for family in ("random-euclidean", "graph-metric"):
    reports, summary = run_batch(family, 10, 15, seed=0)
    print(family)
    print(format_summary(summary))

# %%
# Reports serialize losslessly.
r = reports[0]
print(r.to_json()[:200], "...")
print(SolveReport.from_json(r.to_json()) == r)
