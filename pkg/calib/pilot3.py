"""Pilot 3: smoother dep p=0.05 error series (32 reals, depth 40)."""
import numpy as np

from mpodyn.channels import CircuitSpec
from mpodyn.experiments import EnsembleConfig, total_error_experiment

spec = CircuitSpec(sites=8, depth=40, noise="depolarizing", rate=0.05,
                   seed=0, delta_err=1e-6)
trace = total_error_experiment(spec, EnsembleConfig(realizations=32))
log_err = np.log2(trace.l2_err)
print("t, log2(err), slope")
for i, t in enumerate(trace.times):
    s = log_err[i] - log_err[i - 1] if i else np.nan
    print(f"{t:4.0f} {log_err[i]:9.4f} {s:+.4f}")
np.savez("calib/pilot3_trace.npz", times=trace.times, l2_err=trace.l2_err,
         l2_norm=trace.l2_norm, l1_err=trace.l1_err, lambda_t=trace.lambda_t)
