"""Cone and monoid membership, with the certificates that back each answer.

Run: python demos/01_membership.py
"""

import numpy as np

from equichain import RationalVector, cone_contains, monoid_contains, orbit

V = RationalVector.from_dense

# (n-1, 1) sits in the cone spanned by the Sym(n)-orbit of (n, 1).
for n in range(3, 7):
    gens = orbit("sym", [V([n, 1])], 2, n)
    mem = cone_contains(gens, V([n - 1, 1]))
    used = [(str(g), str(q)) for g, q in mem.certificate.terms]
    print(f"n={n}: {len(gens)} generators, member={mem.member}, combination {used}")

# (3, 1) is outside cone{(2,1), (1,2)}; the Farkas normal y has y.g >= 0 on
# the generators and y.v < 0.
gens = [V([2, 1]), V([1, 2])]
mem = cone_contains(gens, V([3, 1]))
y = np.array(mem.certificate.normal.dense(2), dtype=object)
G = np.array([g.dense(2) for g in gens], dtype=object)
v = np.array(V([3, 1]).dense(2), dtype=object)
print("normal", mem.certificate.normal, " G @ y =", [str(q) for q in G @ y], " v @ y =", str(v @ y))

# in the cone but not in the monoid
gens = [V([2, 0]), V([0, 3])]
print("(1,1) in cone:", cone_contains(gens, V([1, 1])).member,
      " in monoid:", monoid_contains(gens, V([1, 1])).member)
print("(4,3) in monoid with multiplicities",
      [(str(g), m) for g, m in monoid_contains(gens, V([4, 3])).certificate.terms])
