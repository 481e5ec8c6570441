"""The four Sym cone chains side by side, and why the last row disagrees.

The cone2 chain adds w_n = (n-1, 1, ..., 1) at level n. That vector is the
sum of e_1 + e_j over 2 <= j <= n, and every e_1 + e_j is in the Sym-orbit of
w_2 = (1, 1). So w_n is redundant, the chain stabilizes at level 2, and the
generator supports stay at 2.

Run: python demos/04_summary_table.py
"""

import numpy as np

from equichain import RationalVector, corpus, cone_contains, orbit

tab = corpus.table1(8)
cols = tab["columns"]
cells = np.array([[row[c] == "yes" for c in cols] for row in tab["rows"]])
want = np.array([[row["expected"][c] == "yes" for c in cols] for row in tab["rows"]])
print("computed (1 = yes):")
for row, bits in zip(tab["rows"], cells.astype(int)):
    print(f"  {row['example']:<24} {bits}  {row['basis']}")
print("cells differing from the expected table:", [
    (tab["rows"][i]["example"], cols[j]) for i, j in zip(*np.nonzero(cells != want))])

for n in range(3, 7):
    w = RationalVector.from_dense([n - 1] + [1] * (n - 1))
    mem = cone_contains(orbit("sym", [RationalVector.from_dense([1, 1])], 2, n), w)
    print(f"w_{n} = {w}: in cone of Sym(1,1) -> {mem.member}, weights "
          f"{sorted(str(q) for _, q in mem.certificate.terms)}")
