"""Pilot 2: error-series shape at p=0.05; damping plateau + Lambda scan."""
import json
import time

import numpy as np

from mpodyn.channels import CircuitSpec
from mpodyn.experiments import (
    EnsembleConfig, norm_decay_experiment, l1_bound_report,
    total_error_experiment,
)
from mpodyn.fitting import fit_decay

# --- 1. shape of the depolarizing p=0.05 error series -------------------
spec = CircuitSpec(sites=8, depth=30, noise="depolarizing", rate=0.05,
                   seed=0, delta_err=1e-6)
trace = total_error_experiment(spec, EnsembleConfig(realizations=12))
log_err = np.log2(trace.l2_err)
print("t, log2(err), slope");
for i, t in enumerate(trace.times):
    s = log_err[i] - log_err[i - 1] if i else np.nan
    print(f"{t:4.0f} {log_err[i]:9.4f} {s:+.4f}")
print(flush=True)

# --- 2. damping norm plateau lambda(p) at N=8 ---------------------------
lam_by_p = {}
for p, depth in ((0.1, 40), (0.2, 30), (0.3, 24)):
    t0 = time.time()
    res = norm_decay_experiment(
        CircuitSpec(sites=8, depth=depth, noise="amplitude-damping", rate=p,
                    seed=1, delta_err=0.0),
        EnsembleConfig(realizations=24),
    )
    v = res.values
    fit = fit_decay(res.times, v)
    lam_by_p[p] = dict(gamma=fit.gamma, lam=fit.lam, ts=fit.switch_time,
                       secs=round(time.time() - t0, 1))
    print("damp", p, lam_by_p[p], flush=True)
with open("calib/pilot2_lam.json", "w") as fh:
    json.dump(lam_by_p, fh, indent=1)
