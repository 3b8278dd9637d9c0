"""Calibration: N=10 early-decay coefficient regression, both noise types."""
import json, time
import numpy as np
from mpodyn.channels import CircuitSpec
from mpodyn.experiments import norm_decay_experiment, EnsembleConfig
from mpodyn.fitting import fit_decay, regress_through_origin

N = 10
ENS = 96
out = {}
t00 = time.time()
for noise, c_guess in [("depolarizing", 1.33), ("amplitude-damping", 0.69)]:
    ps, gs = [], []
    for p in (0.005, 0.01, 0.02, 0.05):
        ts0 = 0.5 / (c_guess * p)
        depth = int(np.ceil(max(5, min(max(3, ts0 / 2), 80)) + 2))
        t0 = time.time()
        spec = CircuitSpec(sites=N, depth=depth, noise=noise, rate=p, seed=0)
        s = norm_decay_experiment(spec, EnsembleConfig(realizations=ENS))
        fit = fit_decay(s.times, s.values, lam_ref=0.5)
        ps.append(p); gs.append(fit.gamma)
        print(f"{noise} p={p} depth={depth} gamma={fit.gamma:.5f} gamma/p={fit.gamma/p:.3f} "
              f"win={fit.early_window} resid={fit.early_residual:.2e} [{time.time()-t0:.0f}s]", flush=True)
    c = regress_through_origin(ps, gs)
    out[noise] = {"ps": ps, "gammas": gs, "c": c}
    print(f"==> c_{noise} = {c:.4f}", flush=True)
print("total", time.time() - t00, "s")
json.dump(out, open("calib/coeffs.json", "w"), indent=1)
