"""
Exact numbers, words and roots
==============================

"""

from rgdlin import FieldElem, SQRT2, cos_value
from rgdlin import CoxeterMatrix, CoxeterSystem, minimal_gallery
from rgdlin import parse_root, reflection_order, is_prenilpotent

# numbers live in Q(sqrt2, sqrt3); signs are decided exactly
x = FieldElem(99) - 70 * SQRT2
print(x, x.sign(), float(x))
print(cos_value(4) ** 2, cos_value(6) ** 2)

# the (4,4,4) triangle group
S = CoxeterSystem(CoxeterMatrix.type444())
w = S.reduce("r s r s r t")
print(w.labels, w.length, sorted(w.descents()))

# the roots crossed by a minimal gallery from 1 to w
g = minimal_gallery(S, w)
for root in g.roots:
    print(root.expr, root.depth)

# roots are written "word : letter", with a leading "-" for negatives
a = parse_root(S, "e : r")
b = parse_root(S, "r s : t")
print(reflection_order(a, b), is_prenilpotent(a, b))
print(is_prenilpotent(a, -a))
