"""sop spread under alternative readings: damping params, fixed cut, N=10."""

import json
import time

import numpy as np

from mpodyn.experiments import sop_scan
from mpodyn.lindblad import IsingParams, LindbladSpec

DEP = dict(ising=IsingParams(1.0, 1.0, 1.0), noise="depolarizing", kappa=0.04)
DAMP = dict(ising=IsingParams(1.0, 8.0, 1.0), noise="amplitude-damping", kappa=0.4)

out = {}


def scan(tag, n, ttot, cut, kw):
    t0 = time.time()
    spec = LindbladSpec(sites=n, total_time=ttot, dt=0.05, delta_err=1e-6, **kw)
    ser = sop_scan(spec, cut=cut)
    imax = int(np.argmax(ser.values))
    rec = {
        "t_max": float(ser.times[imax]),
        "s_max": float(ser.values[imax]),
        "s_final": float(ser.values[-1]),
        "seconds": time.time() - t0,
    }
    out.setdefault(tag, {})[n] = rec
    print(f"{tag} N={n} cut={cut}: {rec}", flush=True)


for n in (4, 6, 8):
    scan("damp_mid", n, 10.0, None, DAMP)
for n in (4, 6, 8):
    scan("dep_cut2", n, 15.0, 2, DEP)
scan("dep_mid10", 10, 12.0, None, DEP)

with open("calib/pilot6c.json", "w") as fh:
    json.dump(out, fh, indent=1)
print("pilot6c done", flush=True)
