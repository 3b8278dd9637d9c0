"""Circuit pilots: contraction decrements, Lambda across N, nscale timing."""

import json
import time

import numpy as np

from mpodyn.channels import CircuitSpec
from mpodyn.experiments import (
    EnsembleConfig,
    lambda_steady,
    norm_decay_experiment,
    nscale_experiment,
    single_step_truncation_experiment,
    total_error_experiment,
)
from mpodyn.fitting import fit_decay, steady_mean

out = {}


def log(msg):
    print(msg, flush=True)


# --- circuit contraction: single truncation at te, decay decrements ------
out["contract"] = {}
for p, te, depth in ((0.05, 16, 30), (0.1, 8, 22)):
    t0 = time.time()
    norm_series = norm_decay_experiment(
        CircuitSpec(sites=8, depth=depth, noise="depolarizing", rate=p),
        EnsembleConfig(realizations=24),
    )
    fit = fit_decay(norm_series.times, norm_series.values, lam_ref=0.5)
    spec = CircuitSpec(sites=8, depth=depth, noise="depolarizing", rate=p)
    series = single_step_truncation_experiment(
        spec, te, EnsembleConfig(realizations=16)
    )
    mask = series.times >= te + 1
    y = np.log2(series.values[mask])
    decs = -np.diff(y)
    mean_dec = float(np.mean(decs))
    out["contract"][p] = {
        "gamma_fit": fit.gamma,
        "switch_time": fit.switch_time,
        "mean_decrement_over_n": mean_dec / 8.0,
        "ratio": mean_dec / 8.0 / fit.gamma,
        "per_step_decs_over_n": (decs / 8.0).round(4).tolist(),
        "seconds": time.time() - t0,
    }
    log(f"contract p={p}: {out['contract'][p]}")

# --- Lambda, depolarizing circuits N=4,6 (N=8 known from pilot3) ---------
out["lam_dep"] = {}
for n in (4, 6):
    t0 = time.time()
    spec = CircuitSpec(sites=n, depth=30, noise="depolarizing", rate=0.05)
    trace = total_error_experiment(spec, EnsembleConfig(realizations=24))
    logs = np.log2(trace.l2_norm) / n
    fit = fit_decay(trace.times, logs, lam_ref=0.5)
    lam = lambda_steady(trace, 2.0 * fit.switch_time)
    out["lam_dep"][n] = {
        "switch_time": fit.switch_time,
        "lambda_inf": lam,
        "seconds": time.time() - t0,
    }
    log(f"lam dep N={n}: {out['lam_dep'][n]}")

# --- Lambda, amplitude-damping circuits N=4,6,8 --------------------------
out["lam_damp"] = {}
for n in (4, 6, 8):
    t0 = time.time()
    spec = CircuitSpec(sites=n, depth=30, noise="amplitude-damping", rate=0.1)
    trace = total_error_experiment(spec, EnsembleConfig(realizations=24))
    logs = np.log2(trace.l2_norm) / n
    fit = fit_decay(trace.times, logs)
    lam = lambda_steady(trace, 2.0 * fit.switch_time)
    out["lam_damp"][n] = {
        "switch_time": fit.switch_time,
        "lam_plateau": fit.lam,
        "lambda_inf": lam,
        "seconds": time.time() - t0,
    }
    log(f"lam damp N={n}: {out['lam_damp'][n]}")

# --- nscale full config --------------------------------------------------
t0 = time.time()
series = nscale_experiment(
    0.1, [25, 50, 75, 100, 150, 200], depth=2, ens=EnsembleConfig(realizations=24)
)
x, v = series.times, series.values
slope = float(np.dot(x, v) / np.dot(x, x))
resid = v - slope * x
out["nscale"] = {
    "sites": x.tolist(),
    "values": v.tolist(),
    "origin_slope": series.meta["origin_slope"],
    "max_rel_resid": float(np.max(np.abs(resid) / (slope * x))),
    "seconds": time.time() - t0,
}
log(f"nscale: {out['nscale']}")

with open("calib/pilot7.json", "w") as fh:
    json.dump(out, fh, indent=1)
log("pilot7 done")
