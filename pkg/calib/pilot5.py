"""Recompute the corrected improvement metric from the saved dep trace."""
import numpy as np

from mpodyn.experiments import circuit_bound_series
from mpodyn.fitting import fit_decay, plateau_onset, steady_mean

d = np.load("calib/pilot3_trace.npz")
t, norms, e2, e1 = d["times"], d["l2_norm"], d["l2_err"], d["l1_err"]
fit = fit_decay(t, np.log2(norms) / 8, lam_ref=0.5)
bound = circuit_bound_series(t, norms, 1e-6, 8, fit.gamma, fit.switch_time)
print("gamma", fit.gamma, "ts", fit.switch_time)
print("bound>=err all t:", bool(np.all(e2[1:] <= bound[1:])),
      "max ratio", float(np.nanmax(e2[1:] / bound[1:])))
onset = plateau_onset(t[1:], np.log2(e2[1:]), slope_tol=0.1, window=4)
print("plateau onset", onset, "window", [1.5 * fit.switch_time, 2.5 * fit.switch_time])
ss = 2.0 * fit.switch_time
imp = 2.0**4 * steady_mean(t, bound, ss) / steady_mean(t, e1, ss)
lam_inf = steady_mean(t, d["lambda_t"], ss)
print("improvement", imp, "lambda_inf", lam_inf)
