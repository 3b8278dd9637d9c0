"""Pilot: N=8 depolarizing total-error trace timing and plateau shape."""
import json
import time

import numpy as np

from mpodyn.channels import CircuitSpec
from mpodyn.experiments import EnsembleConfig, l1_bound_report, total_error_experiment
from mpodyn.fitting import detect_steady_start, fit_decay

out = {}
for p, depth, reals in ((0.05, 30, 8), (0.1, 24, 8)):
    spec = CircuitSpec(sites=8, depth=depth, noise="depolarizing", rate=p,
                       seed=0, delta_err=1e-6)
    t0 = time.time()
    trace = total_error_experiment(spec, EnsembleConfig(realizations=reals))
    dt = time.time() - t0
    logs = np.log2(trace.l2_norm) / 8
    fit = fit_decay(trace.times, logs, lam_ref=0.5)
    ts = fit.switch_time
    # plateau onset of the error series
    try:
        onset = detect_steady_start(trace.times, np.log2(np.maximum(trace.l2_err, 1e-300)),
                                    slope_tol=0.02, window=3.0)
    except Exception as e:
        onset = str(e)
    rep = l1_bound_report(trace, fit)
    key = f"p{p}"
    out[key] = dict(
        seconds=dt, per_real=dt / reals, gamma=fit.gamma, lam=fit.lam,
        ts=ts, onset=onset, ratio_max=trace.meta["trunc_bound_ratio_max"],
        viol=trace.meta["renorm_violations"], checks=trace.meta["renorm_checks"],
        improvement=rep.steady_improvement, lam_inf=rep.lambda_inf,
        err_peak=float(np.nanmax(trace.l2_err)),
        err_final=float(trace.l2_err[-1]),
        max_rank=int(trace.max_rank.max()),
    )
    print(key, json.dumps(out[key], indent=1, default=str), flush=True)
with open("calib/pilot_trace.json", "w") as fh:
    json.dump(out, fh, indent=1, default=str)
