"""Query-cost sweeps and their log-log slopes.

Run: python demos/scaling_sweeps.py
"""

import numpy as np

from localpr.bench import EPS_SWEEP_MIN_COUNT, fit_slope, sweep_d, sweep_eps, sweep_n

# pushbacks against n pi(t) / eps on a multi-level instance; slope near 1
recs = sweep_eps(4096, 40960, 4, 1024, [0.5, 0.2, 0.1, 0.05, 0.02, 0.01], alpha=0.5,
                 multilevel=True, arity=2)
for r in recs:
    print(f"eps={r.eps:<5} pushbacks={r.pushbacks:6d} bound={r.bound:9.1f}")
print("eps slope:", round(fit_slope([r.x for r in recs], [r.pushbacks for r in recs],
                                    EPS_SWEEP_MIN_COUNT), 3))

# detection cost against d with |V| fixed
ds = [2, 4, 8, 16, 32]
recs = sweep_d(4000, 40000, 16, ds)
print("d slope (indeg):", round(fit_slope(ds, [r.queries.local_total for r in recs]), 3))

# adaptive estimation cost against n with |V| = sqrt(n/d); slope near 1/2
ns = [1000, 4000, 16000]
recs = sweep_n(ns, seeds=range(5))
means = [np.mean([r.queries.total for r in recs if r.x == n]) for n in ns]
print("n slope:", round(fit_slope(ns, means), 3))
