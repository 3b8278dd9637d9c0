"""Exact acceptance-test nscale config at rate 0.2."""
import numpy as np
from mpodyn.experiments import nscale_experiment
from mpodyn.experiments import EnsembleConfig
from mpodyn.fitting import regress_through_origin

series = nscale_experiment(0.2, [25, 50, 75, 100, 150, 200], depth=2,
                           ens=EnsembleConfig(realizations=48))
x, v = series.times, series.values
slope = regress_through_origin(x, v)
rel_resid = np.abs(v - slope * x) / (slope * x)
free_slope, intercept = np.polyfit(x, v, 1)
print("values:", [f"{val:.4e}" for val in v])
print("origin slope:", f"{slope:.4e}")
print("rel resid:", [f"{r:.3f}" for r in rel_resid], "max:", f"{rel_resid.max():.3f}")
print("free slope:", f"{free_slope:.4e}", "intercept:", f"{intercept:.4e}")
print("intercept / (free_slope*mean_x):", f"{abs(intercept)/(free_slope*x.mean()):.4f}")
print("ratio200/100:", f"{v[-1]/v[3]:.3f}")
