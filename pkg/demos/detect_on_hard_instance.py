"""Finding every node that contributes at least a delta share to a target.

Run: python demos/detect_on_hard_instance.py
"""

import numpy as np

from localpr import AccessOracle, detect_adaptive, exact_contributions, gen_contribution_hard

ALPHA = 0.2

# the generator plants a small group U of strong contributors behind a fan of weaker ones
g, meta = gen_contribution_hard(4000, 40000, 8, 16)
print(f"instance: n={g.n} m={g.m}, target {meta.t}, delta={meta.delta:.4g}")

x = exact_contributions(g, meta.t, ALPHA).values
truth = set(np.flatnonzero(x >= meta.delta * x.sum()).tolist())
print(f"true delta-set has {len(truth)} nodes")

# each variant halves eps until its own tally says the remaining mass is small enough
for variant in ("indeg", "outdeg", "sqrt_m", "combined"):
    res = detect_adaptive(AccessOracle(g), meta.t, ALPHA, meta.delta, variant)
    print(f"{variant:>8}: returned {len(res.nodes):4d} nodes, superset={truth <= res.nodes}, "
          f"final eps={res.final_eps:.2e}, local queries={res.stats.local_total}")
