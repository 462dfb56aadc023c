"""The family H_0 .. H_p: nearly identical graphs with geometrically growing pi(t).

Run: python demos/hard_family.py
"""

import numpy as np

from localpr import AccessOracle, bippr_adaptive, gen_pagerank_family

ALPHA = 0.2

fam = gen_pagerank_family(1000, 32000, 4, 16, 4, delta_in=32, delta_out=32)
for g, meta in fam:
    print(f"H_{meta.i}: n={g.n} m={g.m} pi(t)={meta.pi_t:.4e}")

pis = [meta.pi_t for _, meta in fam]
print("successive ratios:", np.round(np.array(pis[1:]) / pis[:-1], 3))

# a (1 +- 1/4) estimator has to tell the two ends apart
for g, meta in (fam[0], fam[-1]):
    o = AccessOracle(g)
    vals = [bippr_adaptive(o, meta.t, ALPHA, 0.25, 1 / 3, s).value for s in range(10)]
    print(f"H_{meta.i}: median estimate {np.median(vals):.4e} over 10 seeds")
