"""Lindblad pilots: steady Lambda across N, contraction fit, sop timing."""

import json
import time

import numpy as np

from mpodyn.experiments import (
    lambda_steady,
    lindblad_steady_start,
    single_step_truncation_experiment,
    sop_scan,
    total_error_experiment,
)
from mpodyn.lindblad import IsingParams, LindbladSpec

DEP = dict(ising=IsingParams(1.0, 1.0, 1.0), noise="depolarizing", kappa=0.04)
DAMP = dict(ising=IsingParams(1.0, 8.0, 1.0), noise="amplitude-damping", kappa=0.4)

out = {}


def log(msg):
    print(msg, flush=True)


def rsq(x, y):
    slope, icpt = np.polyfit(x, y, 1)
    pred = slope * x + icpt
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    return slope, icpt, 1.0 - ss_res / ss_tot


# --- Lambda across N, depolarizing Lindblad -------------------------------
out["lam_dep"] = {}
for n in (4, 6, 8):
    t0 = time.time()
    spec = LindbladSpec(sites=n, total_time=55.0, dt=0.05, delta_err=1e-6, **DEP)
    trace = total_error_experiment(spec, want_l1=True)
    ss = lindblad_steady_start(trace)
    lam = lambda_steady(trace, ss)
    out["lam_dep"][n] = {
        "steady_start": ss,
        "lambda_inf": lam,
        "max_rank": int(trace.max_rank.max()),
        "final_log2norm_per_site": float(np.log2(trace.l2_norm[-1]) / n),
        "seconds": time.time() - t0,
    }
    log(f"dep N={n}: {out['lam_dep'][n]}")

# --- Lambda across N, amplitude-damping Lindblad --------------------------
out["lam_damp"] = {}
for n in (4, 6, 8):
    t0 = time.time()
    spec = LindbladSpec(sites=n, total_time=8.0, dt=0.05, delta_err=1e-6, **DAMP)
    trace = total_error_experiment(spec, want_l1=True)
    ss = lindblad_steady_start(trace)
    lam = lambda_steady(trace, ss)
    out["lam_damp"][n] = {
        "steady_start": ss,
        "lambda_inf": lam,
        "max_rank": int(trace.max_rank.max()),
        "final_log2norm_per_site": float(np.log2(trace.l2_norm[-1]) / n),
        "seconds": time.time() - t0,
    }
    log(f"damp N={n}: {out['lam_damp'][n]}")

# --- Lindblad contraction: single truncation at te, watch decay -----------
for n, te, ttot in ((6, 30.0, 55.0),):
    t0 = time.time()
    spec = LindbladSpec(sites=n, total_time=ttot, dt=0.05, delta_err=1e-6, **DEP)
    series = single_step_truncation_experiment(spec, te)
    mask = series.times >= te + 2.0
    y = np.log2(series.values[mask])
    x = series.times[mask]
    slope, icpt, r2 = rsq(x, y)
    out["contract_lind"] = {
        "n": n,
        "te": te,
        "slope_log2_per_time": float(slope),
        "Gamma_per_site": float(-slope / n),
        "r2": r2,
        "err_at_te+2": float(2.0 ** y[0]),
        "err_final": float(2.0 ** y[-1]),
        "seconds": time.time() - t0,
    }
    log(f"contract lind: {out['contract_lind']}")

# --- sop scans ------------------------------------------------------------
out["sop"] = {}
for n, ttot in ((4, 20.0), (6, 20.0), (8, 15.0)):
    t0 = time.time()
    spec = LindbladSpec(sites=n, total_time=ttot, dt=0.05, delta_err=1e-6, **DEP)
    ser = sop_scan(spec)
    imax = int(np.argmax(ser.values))
    out["sop"][n] = {
        "t_max": float(ser.times[imax]),
        "s_max": float(ser.values[imax]),
        "s_final": float(ser.values[-1]),
        "seconds": time.time() - t0,
    }
    log(f"sop N={n}: {out['sop'][n]}")

with open("calib/pilot6.json", "w") as fh:
    json.dump(out, fh, indent=1)
log("pilot6 done")
