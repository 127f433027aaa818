"""Low-correlation pairs in l^p spaces.

For p != 2 every vector tau_j is paired with a norming functional, so
f_j(tau_j) = 1 and |f_j(tau_k)| <= 1.  The search minimizes the largest
off-diagonal pairing.
"""
import math

from welchbanach import LpSpace, SearchConfig, grassmannian_search, welch_rhs
from welchbanach.serialize import table

n, d = 4, 2
floor = math.sqrt(welch_rhs(n, d, 1))
rows = []
for p in (1.0, 1.5, 2.0, 3.0, 4.0, math.inf):
    space = LpSpace(d, p, "real")
    res = grassmannian_search(space, n, SearchConfig(seed=3, restarts=8, max_iters=3000))
    rows.append([f"{p:g}", res.objective_value, res.feasibility.worst, res.converged])
print(f"{n} vectors in real l^p of dimension {d}; first order floor {floor:.6g} when hypotheses hold")
print(table(["p", "correlation", "feasibility", "converged"], rows))
