"""Pilot 4: damping Lambda_inf and improvement factor at N=8, p in {0.3, 0.5}."""
import json
import time

import numpy as np

from mpodyn.channels import CircuitSpec
from mpodyn.experiments import (
    EnsembleConfig, l1_bound_report, total_error_experiment,
)
from mpodyn.fitting import fit_decay

out = {}
for p, depth in ((0.3, 24), (0.5, 20)):
    t0 = time.time()
    spec = CircuitSpec(sites=8, depth=depth, noise="amplitude-damping", rate=p,
                       seed=3, delta_err=1e-6)
    trace = total_error_experiment(spec, EnsembleConfig(realizations=16))
    fit = fit_decay(trace.times, np.log2(trace.l2_norm) / 8)
    rep = l1_bound_report(trace, fit)
    out[p] = dict(
        gamma=fit.gamma, lam=fit.lam, ts=fit.switch_time,
        lam_inf=rep.lambda_inf, improvement=rep.steady_improvement,
        steady_norm=float(np.mean(trace.l2_norm[trace.times >= 2 * fit.switch_time])),
        err_final=float(trace.l2_err[-1]),
        secs=round(time.time() - t0, 1),
    )
    print(p, json.dumps(out[p], indent=1), flush=True)
with open("calib/pilot4.json", "w") as fh:
    json.dump(out, fh, indent=1)
