"""
Exact counts and redundancy at desk scale
=========================================

Exhaustive counting is only feasible for tiny arrays, but it is enough to
see the thresholds at work.
"""
from mdcodes import analysis
from mdcodes.oracles import ConstraintParams, exhaustive_count, redundancy

# one dimension, no two adjacent zeros: Fibonacci
print([exhaustive_count(ConstraintParams("zero-cubes-free", 1, 2, n, 2)) for n in range(1, 11)])

# the smallest L the counting argument allows, and the count it leaves
for n in (3, 4, 5):
    rep = analysis.threshold("zero-cubes-free", n, 2, 2)
    p = ConstraintParams("zero-cubes-free", 2, 2, n, rep.minimal)
    c = exhaustive_count(p)
    print(f"n={n} L={rep.minimal} count={c} redundancy={redundancy(p, c):.4f}")

# redundancy at fixed L=2 grows with the array
print(analysis.CSV_HEADER)
for row in analysis.redundancy_table("zero-cubes-free", 2, 2, [3, 4, 5], 2):
    print(row.csv())
