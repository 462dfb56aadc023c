"""Plain random walks against push-plus-walks for one node's PageRank.

Run: python demos/mc_vs_bippr.py
"""

import numpy as np

from localpr import AccessOracle, WalkConfig, bippr_adaptive, gen_pagerank_hard, mc_pagerank, stream

ALPHA, C = 0.2, 0.25

g, meta = gen_pagerank_hard(4000, 128000, 4, 32, 4, 4, delta_in=32, delta_out=32)
print(f"n={g.n} m={g.m}, true pi(t)={meta.pi_t:.3e}")

# bidirectional: spend half of each budget on push, half on walks, double until certified
o = AccessOracle(g)
est = bippr_adaptive(o, meta.t, ALPHA, C, 1 / 3, seed=7)
err = abs(est.value - meta.pi_t) / meta.pi_t
print(f"bippr: {est.value:.3e} (rel err {err:.3f}) with {est.queries.total} queries, "
      f"eps={est.eps:.2e}, {est.rounds} rounds")

# walks alone at roughly the same query spend, for comparison
o = AccessOracle(g)
walks = max(1, int(est.queries.total * ALPHA / (2 - ALPHA)))
mc = mc_pagerank(o, meta.t, WalkConfig(ALPHA), walks, stream(7))
print(f"monte carlo, {walks} walks: {mc.value:.3e} with {mc.queries.total} queries, "
      f"expected hits {walks * meta.pi_t:.1f}")
