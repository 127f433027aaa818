"""Numerically recover equiangular tight frames of d^2 lines.

In d = 2 and d = 3 the search lands on a SIC: every pair of lines has
squared overlap 1/(d+1).
"""
import numpy as np

from welchbanach import SearchConfig, etf_search, equiangularity, frame_correlation, tightness

for d in (2, 3):
    res = etf_search(d, SearchConfig(seed=1, restarts=16))
    pair = res.pair
    eq = equiangularity(pair)
    print(f"d = {d}: residual {res.objective_value:.2e} after {res.iters_used} iterations (restart {res.restart})")
    print(f"  squared overlap {eq.gamma:.9f}, target {1 / (d + 1):.9f}, spread {eq.max_dev:.1e}")
    print(f"  correlation {frame_correlation(pair):.9f}, tight: {tightness(pair).tight}")


# The overlaps |<tau_j, tau_k>|^2 of the last solution, for inspection.
v = pair.vectors
print(np.round(np.abs(v.conj() @ v.T) ** 2, 6))
