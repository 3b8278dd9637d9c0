"""Statistics for the N-scaling experiment: is the superlinearity noise?"""
import numpy as np
import time
from mpodyn.experiments import _nscale_single
from mpodyn.channels import CircuitSpec

for n in (25, 50, 100, 200):
    spec = CircuitSpec(sites=n, depth=2, noise="depolarizing", rate=0.1,
                       seed=0, delta_err=1e-6)
    t0 = time.time()
    rows = [_nscale_single(spec, r) for r in range(96)]
    dist = np.array([r[0] for r in rows])
    norm = np.array([r[1] for r in rows])
    dsum = np.array([r[2] for r in rows])
    ratio2 = (dist / norm) ** 2
    pooled = (dist.mean() / norm.mean()) ** 2
    print(f"N={n:4d}: pooled={pooled:.4e} mean(r2)={ratio2.mean():.4e} "
          f"med={np.median(ratio2):.4e} sem={ratio2.std(ddof=1)/np.sqrt(96):.2e} "
          f"min={ratio2.min():.2e} max={ratio2.max():.2e} "
          f"dsum/bond={dsum.mean()/(n-1):.3e} per-bond-r2={ratio2.mean()/(n-1):.3e} "
          f"({time.time()-t0:.0f}s)", flush=True)
