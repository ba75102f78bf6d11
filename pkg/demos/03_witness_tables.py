"""
Relation tables and their witnesses
===================================

"""

from rgdlin import CoxeterMatrix, CoxeterSystem
from rgdlin import canonical_basis, gcm_basis
from rgdlin import blueprint_444, check_nc, check_not_linear, trivial_table, verify_certificate
from rgdlin.witness import pair_exclusion_for

S = CoxeterSystem(CoxeterMatrix.type444())
T = blueprint_444(S, {3}, 5)
for entry in T.nontrivial():
    print(entry.alpha.expr, "|", entry.beta.expr, "->", sorted(r.expr for r in entry.factors))

# one verdict per basis
for B in (canonical_basis(S.matrix), gcm_basis([[2, -1, -2], [-2, 2, -1], [-1, -2, 2]], S.labels, S.matrix)):
    v = check_not_linear(T, B)
    print(B.name, v.status, v.witness.expr, v.cone.reason)

# (nc) fails, and the trivial table passes it
print(check_nc(T), check_nc(trivial_table(S, [e.pair for e in T.entries])))

# the basis-free argument
cert = pair_exclusion_for(S, 3)
res = verify_certificate(cert)
print(res.accepted)
for note in res.bounded:
    print("  bounded:", note)
