"""Welch bounds on a few textbook frames.

Run with ``python3 demos/classical_welch.py``.
"""
import numpy as np

from welchbanach import discrete_welch_max_check, frame_correlation, full_report, hilbert_embed, LpSpace
from welchbanach.fixtures import hesse_sic, mercedes_benz, sic_qubit
from welchbanach.serialize import table

# Three unit vectors at 120 degrees in the plane.  Each vector pairs with its
# own conjugate, so the Gram matrix is the usual inner product matrix.
mb = mercedes_benz()
print("Mercedes-Benz Gram matrix:")
print(np.round(mb.vectors @ mb.functionals.T, 6).real)

# The squared correlation sits exactly on the first order floor.
prod, single = discrete_welch_max_check(mb, 1)
print(f"\nmax |G_jk|^2 = {single.lhs:.6g}, floor = {single.rhs:.6g}, equality: {single.equality}")

# Higher orders: the qubit SIC hits the m = 2 floor of 1/9 and the Hesse SIC
# in C^3 hits 1/16.  Their m = 1 checks are tight too.
rows = []
for name, pair in (("Mercedes-Benz", mb), ("qubit SIC", sic_qubit()), ("Hesse SIC", hesse_sic())):
    for m in (1, 2, 3):
        _, rec = discrete_welch_max_check(pair, m)
        rows.append([name, m, rec.lhs, rec.rhs, rec.slack, rec.equality])
print()
print(table(["frame", "m", "lhs", "rhs", "slack", "equality"], rows))

# A random frame is well above every floor.
rng = np.random.default_rng(7)
v = rng.standard_normal((6, 3))
v /= np.linalg.norm(v, axis=1, keepdims=True)
rand = hilbert_embed(v, LpSpace(3, 2.0, "real"))
print(f"\nrandom 6 vectors in R^3: correlation {frame_correlation(rand):.4f}")
rep = full_report(rand, orders=(1, 2))
print(table(["check", "lhs", "rhs", "holds"], [[r.name, r.lhs, r.rhs, r.holds] for r in rep.records]))
print("\nreference lower bounds for unit vectors:")
print(table(["bound", "value", "applicable"], [[c.name, c.value, c.applicable] for c in rep.classical]))
