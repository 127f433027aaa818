"""Frames indexed by a weighted set of atoms.

A discrete frame is the special case of counting measure.  Splitting an atom
into pieces with scaled vectors changes the measure but not the frame operator.
"""
import numpy as np

from welchbanach import ContinuousASF, FiniteMeasure, cont_frame_operator, cont_welch_check, partition_construction
from welchbanach.continuous import counting
from welchbanach.fixtures import mercedes_benz

mb = mercedes_benz()

# Uniform weights 2/3 make the three directions a Parseval frame.
casf = ContinuousASF(FiniteMeasure.uniform(3, 2 / 3), mb)
print("frame operator with weights 2/3:\n", np.round(cont_frame_operator(casf).real, 12))
for rec in cont_welch_check(casf, 1):
    print(f"  {rec.name}: lhs {rec.lhs:.6g}  rhs {rec.rhs:.6g}  equality {rec.equality}")

# Skewed weights break tightness; the floor still holds.
skew = ContinuousASF(FiniteMeasure((0, 1, 2), np.array([0.2, 0.5, 1.3])), mb)
for rec in cont_welch_check(skew, 1):
    print(f"  skewed {rec.name}: lhs {rec.lhs:.6g} >= rhs {rec.rhs:.6g}: {rec.holds}")

# Counting measure reproduces the discrete numbers.
print("\ncounting measure sum form:", cont_welch_check(counting(mb), 1)[0].lhs)

# Partition with arbitrary masses keeps S fixed.
masses = [0.1, 3.0, 42.0]
part = partition_construction(mb, masses)
print("max |S_partition - S| =", np.max(np.abs(cont_frame_operator(part) - cont_frame_operator(counting(mb)))))
