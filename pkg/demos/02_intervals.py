"""
Geometric and algebraic root intervals
======================================

"""

import numpy as np

from rgdlin import CoxeterMatrix, CoxeterSystem, parse_root
from rgdlin import canonical_basis, sample_basis
from rgdlin import geometric_interval, algebraic_interval, cone_membership, divergence_scan

S = CoxeterSystem(CoxeterMatrix.universal())
alpha = parse_root(S, "- e : r")
beta = parse_root(S, "s t s : t")

# geometric side: exact in rank 2, bounded search otherwise
geo = geometric_interval(alpha, beta, 8)
for root in geo.members:
    print(root.expr, geo.status[root])

# algebraic side: nonnegative cone in the basis
B = canonical_basis(S.matrix)
alg = algebraic_interval(B, alpha, beta)
print([r.expr for r in alg.members])

# alpha_s is in the first and not in the second
a_s = parse_root(S, "e : s")
print(cone_membership(B, a_s, alpha, beta))

# the same happens for random bases
for seed in range(3):
    Bk = sample_basis(S.matrix, seed)
    print(Bk.name, np.array([[float(x) for x in row] for row in Bk.cartan]).round(2).tolist(),
          cone_membership(Bk, a_s, alpha, beta).member)

# how many short pairs disagree?
records = divergence_scan(S, B, length=3, radius=6, depth=8)
print(len(records), [r.expr for r in records[0].pair], [r.expr for r in records[0].missing])
