"""Shared helpers: synthetic CSV fixtures in the documented artifact format."""

from __future__ import annotations

import numpy as np


def write_table(path, kind, meta, columns, version=1, magic="mpodyn-csv"):
    """Write a CSV artifact from (name, values) column pairs."""
    lines = [f"# {magic} v{version}", f"# kind: {kind}"]
    for key, value in meta.items():
        lines.append(f"# {key}: {value}")
    names = [name for name, _ in columns]
    lines.append("# columns: " + ",".join(names))
    arrays = [np.asarray(vals, dtype=np.float64) for _, vals in columns]
    for row in zip(*arrays):
        lines.append(",".join(f"{x:.17g}" for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def error_trace_csv(path, with_bound=True, violate_at=None, rows=12, dynamics="circuit"):
    """A plausible error-trace table; optionally break the bound at one row."""
    t = np.arange(1.0, rows + 1.0)
    norm = 2.0 ** (-0.4 * t)
    err = 1e-3 * np.sqrt(t) * norm
    bound = 4e-3 * t * norm
    if violate_at is not None:
        err[violate_at] = bound[violate_at] * 1.5
    lam = np.full(rows, 0.8)
    meta = {"dynamics": dynamics, "sites": 4, "noise": "depolarizing"}
    if dynamics == "circuit":
        meta["rate"] = 0.05
    else:
        meta["kappa"] = 0.04
    cols = [("t", t), ("l2_norm", norm), ("l2_err", err), ("l1_err", err * 2.0), ("lambda", lam)]
    if with_bound:
        cols.append(("bound", bound))
    cols += [("delta_sum", np.full(rows, 1e-6)), ("max_rank", np.full(rows, 4.0))]
    return write_table(path, "error-trace", meta, cols)


def norm_decay_csv(path, dynamics="circuit", closed_form=False, rows=10):
    t = np.arange(1.0, rows + 1.0)
    v = -0.05 * t
    meta = {"dynamics": dynamics, "sites": 4, "noise": "depolarizing"}
    if dynamics == "lindblad":
        meta["kappa"] = 0.04
    elif dynamics == "circuit":
        meta["rate"] = 0.1
    else:
        meta["rate"] = 0.75
    cols = [("t", t), ("log2_norm_per_site", v)]
    if closed_form:
        cols.append(("closed_form", v))
    return write_table(path, "norm-decay", meta, cols)


def nscale_csv(path, rows=6):
    sites = np.array([25.0, 50.0, 75.0, 100.0, 150.0, 200.0])[:rows]
    vals = 1.3e-5 * sites * (1.0 + 0.02 * np.sin(sites))
    meta = {"noise": "depolarizing", "rate": 0.1, "depth": 2}
    return write_table(path, "nscale", meta, [("sites", sites), ("err_over_norm_sq", vals)])


def sop_csv(path, sites=6, rows=20):
    t = np.arange(0.0, float(rows)) * 0.05
    s = 1.5 * (1.0 - np.exp(-t))
    meta = {"dynamics": "lindblad", "sites": sites, "noise": "depolarizing", "cut": sites // 2}
    return write_table(path, "sop", meta, [("t", t), ("s_op", s)])
