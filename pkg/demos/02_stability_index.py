"""Stability index of the ideal chains: it equals m, and m + l for the primed variant.

The limit ideal is generated by the orbit of x[1,1] in every case, so the
index carries no information about the size of the limit generators.

Run: python demos/02_stability_index.py
"""

from equichain import corpus
from equichain.chains import limit_generators, stability_index

print(f"{'chain':<26}{'index':>6}  limit candidates")
for ref in ["ex-nobound?m=2", "ex-nobound?m=3", "ex-nobound?m=4",
            "ex-nobound-prime?m=2,l=1", "ex-nobound-prime?m=2,l=3", "ex-nobound-prime?m=3,l=2"]:
    spec = corpus.load_entry(ref).spec
    N = sum(spec.env().values()) + 5
    v = stability_index(spec, N)
    lim = limit_generators(spec, N)
    print(f"{ref:<26}{v.index:>6}  {' '.join(map(str, lim.generators))}")

# where the last failing step happens and what it adds
v = stability_index(corpus.load_entry("ex-nobound?m=4").spec, 9)
for s in v.witnesses:
    print(f"step {s.n}->{s.n + 1} adds {s.witness}")
