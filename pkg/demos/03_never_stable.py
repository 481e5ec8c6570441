"""Two Inc chains of cones that never stabilize, one saturated and one not.

Run: python demos/03_never_stable.py
"""

from equichain import corpus
from equichain.chains import local_global_report

for name in ["ex-inc-not-stable", "ex-inc-support-size", "ex-no-hiller-sullivant"]:
    rep = local_global_report(corpus.load_entry(name).spec, 7, framework=False)
    print(name)
    print("  summary:", rep.summary())
    for s in rep.stability.witnesses:
        print(f"  step {s.n}->{s.n + 1}: {s.witness} is new ({s.certificate.certificate.to_json()['type']})")
    print("  limit candidates:", " ".join(map(str, rep.limit.generators)))
