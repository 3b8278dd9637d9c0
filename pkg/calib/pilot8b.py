"""Rate dependence of N-scaling linearity."""
import numpy as np
import time
from mpodyn.experiments import _nscale_single
from mpodyn.channels import CircuitSpec

for p in (0.02, 0.05, 0.2, 0.3):
    rows = {}
    for n in (25, 50, 100, 200):
        spec = CircuitSpec(sites=n, depth=2, noise="depolarizing", rate=p,
                           seed=0, delta_err=1e-6)
        t0 = time.time()
        res = [_nscale_single(spec, r) for r in range(48)]
        dist = np.array([r[0] for r in res])
        norm = np.array([r[1] for r in res])
        dsum = np.array([r[2] for r in res])
        pooled = (dist.mean() / norm.mean()) ** 2
        rows[n] = (pooled, dsum.mean() / (n - 1), time.time() - t0)
    per_bond = {n: v[0] / (n - 1) for n, v in rows.items()}
    r_200_100 = rows[200][0] / rows[100][0]
    r_50_25 = rows[50][0] / rows[25][0]
    print(f"p={p}: per-bond r2 " +
          " ".join(f"N{n}={per_bond[n]:.3e}" for n in rows) +
          f" | ratio200/100={r_200_100:.3f} ratio50/25={r_50_25:.3f}" +
          f" | dsum/bond N200={rows[200][1]:.2e} | {sum(v[2] for v in rows.values()):.0f}s",
          flush=True)
