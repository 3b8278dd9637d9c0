"""Command-line frontend: config parsing, dispatch, seeding, file output.

One config file describes one experiment.  Parameter sweeps are written as
explicit lists for the sweepable keys (``sites`` and ``rate``/``kappa``);
they expand into child runs whose seeds derive deterministically from the
base seed and the child index, so the manifest alone reproduces every
output file.  When no key is swept the base seed is used unchanged.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import __version__
from .channels import DAMPING, DEPOLARIZING, NOISE_KINDS, CircuitSpec
from .errors import (
    ConfigError,
    DegenerateTraceError,
    FitWindowError,
    NumericError,
    ShapeError,
    SizeGuardError,
    SvdBackendError,
)
from .experiments import (
    EnsembleConfig,
    circuit_bound_series,
    empirical_bound_lindblad,
    evolve_circuit_mps,
    norm_decay_experiment,
    nscale_experiment,
    sop_scan,
    total_error_experiment,
)
from .fitting import fit_decay
from .lindblad import IsingParams, LindbladSpec, evolve_lindblad
from .oracle import (
    pure_damping_log2_l2,
    pure_depolarizing_log2_l2,
    rabi_damping_closed_form,
    rabi_damping_steady_purity,
)
from .output import read_csv, write_csv, write_manifest

MODES = ("circuit", "lindblad", "pure-noise", "single-qubit", "nscale", "fit", "sop")

EXIT_CODES = (
    (ConfigError, 2),
    (ShapeError, 3),
    (SvdBackendError, 5),
    (SizeGuardError, 6),
    (DegenerateTraceError, 7),
    (FitWindowError, 8),
    (NumericError, 4),
    (OSError, 10),
)


# ----------------------------------------------------------------------
# config schema


@dataclass(frozen=True)
class Field:
    """Validation rule for one config key."""

    default: object = None
    kind: str = "float"  # float | int | bool | str
    minimum: float | None = None
    maximum: float | None = None
    exclusive_min: bool = False
    choices: tuple | None = None
    sweep: bool = False
    optional: bool = False
    required: bool = False
    int_list: bool = False

    def range_text(self) -> str:
        if self.choices is not None:
            return "one of " + ", ".join(repr(c) for c in self.choices)
        if self.kind == "bool":
            return "a boolean"
        lo = "" if self.minimum is None else str(self.minimum)
        hi = "" if self.maximum is None else str(self.maximum)
        if lo and hi:
            left = "(" if self.exclusive_min else "["
            return f"a number in {left}{lo}, {hi}]"
        if lo:
            op = ">" if self.exclusive_min else ">="
            return f"a number {op} {lo}"
        return f"a {self.kind}"


_CIRCUIT_KEYS = {
    "sites": Field(default=4, kind="int", minimum=2, sweep=True),
    "depth": Field(default=20, kind="int", minimum=1),
    "noise": Field(default=DEPOLARIZING, kind="str", choices=NOISE_KINDS),
    "rate": Field(default=0.1, minimum=0.0, maximum=1.0, sweep=True),
    "seed": Field(default=0, kind="int", minimum=0),
    "delta_err": Field(default=1e-6, minimum=0.0),
    "initial": Field(default="zeros", kind="str", choices=("zeros", "ones")),
    "realizations": Field(default=100, kind="int", minimum=1),
    "trace_errors": Field(default=False, kind="bool"),
    "bound": Field(default=True, kind="bool"),
    "l1": Field(default=True, kind="bool"),
}

_LINDBLAD_KEYS = {
    "sites": Field(default=4, kind="int", minimum=2, sweep=True),
    "total_time": Field(default=10.0, minimum=0.0, exclusive_min=True),
    "dt": Field(default=0.05, minimum=0.0, exclusive_min=True),
    "noise": Field(default=DEPOLARIZING, kind="str", choices=NOISE_KINDS),
    "kappa": Field(default=0.04, minimum=0.0, exclusive_min=True, sweep=True),
    "coupling": Field(default=1.0),
    "transverse": Field(default=1.0),
    "longitudinal": Field(default=1.0),
    "delta_err": Field(default=1e-6, minimum=0.0),
    "trace_errors": Field(default=False, kind="bool"),
    "contraction": Field(default=None, minimum=0.0, exclusive_min=True, optional=True),
    "l1": Field(default=True, kind="bool"),
}

_PURE_KEYS = {
    "sites": Field(default=4, kind="int", minimum=2, sweep=True),
    "depth": Field(default=50, kind="int", minimum=1),
    "noise": Field(default=DEPOLARIZING, kind="str", choices=NOISE_KINDS),
    "rate": Field(default=0.1, minimum=0.0, maximum=1.0, sweep=True),
    "seed": Field(default=0, kind="int", minimum=0),
}

_SINGLE_QUBIT_KEYS = {
    "omega": Field(default=1.0, minimum=0.0, exclusive_min=True),
    "kappa": Field(default=0.0, minimum=0.0),
    "total_time": Field(default=10.0, minimum=0.0, exclusive_min=True),
    "samples": Field(default=201, kind="int", minimum=2),
}

_NSCALE_KEYS = {
    "rate": Field(default=0.1, minimum=0.0, maximum=1.0),
    "sites": Field(default=(25, 50, 75, 100, 150, 200), kind="int", minimum=2, int_list=True),
    "depth": Field(default=2, kind="int", minimum=1),
    "noise": Field(default=DEPOLARIZING, kind="str", choices=NOISE_KINDS),
    "delta_err": Field(default=1e-6, minimum=0.0),
    "seed": Field(default=0, kind="int", minimum=0),
    "realizations": Field(default=24, kind="int", minimum=1),
}

_FIT_KEYS = {
    "input": Field(kind="str", required=True),
    "lam_ref": Field(default=None, minimum=0.0, optional=True),
}

_SOP_KEYS = {
    "dynamics": Field(default="lindblad", kind="str", choices=("lindblad", "circuit")),
    "cut": Field(default=None, kind="int", minimum=1, optional=True),
    "sites": Field(default=4, kind="int", minimum=2),
    "noise": Field(default=DEPOLARIZING, kind="str", choices=NOISE_KINDS),
    "delta_err": Field(default=1e-6, minimum=0.0),
    # lindblad dynamics
    "total_time": Field(default=10.0, minimum=0.0, exclusive_min=True),
    "dt": Field(default=0.05, minimum=0.0, exclusive_min=True),
    "kappa": Field(default=0.04, minimum=0.0, exclusive_min=True),
    "coupling": Field(default=1.0),
    "transverse": Field(default=1.0),
    "longitudinal": Field(default=1.0),
    # circuit dynamics
    "depth": Field(default=20, kind="int", minimum=1),
    "rate": Field(default=0.1, minimum=0.0, maximum=1.0),
    "seed": Field(default=0, kind="int", minimum=0),
}

_SCHEMAS = {
    "circuit": _CIRCUIT_KEYS,
    "lindblad": _LINDBLAD_KEYS,
    "pure-noise": _PURE_KEYS,
    "single-qubit": _SINGLE_QUBIT_KEYS,
    "nscale": _NSCALE_KEYS,
    "fit": _FIT_KEYS,
    "sop": _SOP_KEYS,
}


def _check_scalar(key: str, f: Field, value):
    if value is None:
        if f.optional:
            return None
        raise ConfigError(f"{key}: null not allowed, expected {f.range_text()}")
    if f.kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
        return value
    if f.kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        if f.choices is not None and value not in f.choices:
            raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
    if f.kind == "int":
        if float(value) != int(value):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if f.minimum is not None:
        if f.exclusive_min and not value > f.minimum:
            raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
        if not f.exclusive_min and not value >= f.minimum:
            raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
    if f.maximum is not None and not value <= f.maximum:
        raise ConfigError(f"{key}: expected {f.range_text()}, got {value!r}")
    return value


def _check_value(key: str, f: Field, value):
    if isinstance(value, (list, tuple)):
        if not (f.sweep or f.int_list):
            raise ConfigError(f"{key}: lists not allowed, expected {f.range_text()}")
        if len(value) == 0:
            raise ConfigError(f"{key}: empty list")
        return tuple(_check_scalar(key, f, v) for v in value)
    if f.int_list:
        raise ConfigError(f"{key}: expected a list of integers, got {value!r}")
    return _check_scalar(key, f, value)


def validate_params(mode: str, raw: dict) -> dict:
    """Validate & canonicalize config keys for a mode; fill defaults."""
    if mode not in _SCHEMAS:
        raise ConfigError(f"mode: expected one of {', '.join(MODES)}, got {mode!r}")
    schema = _SCHEMAS[mode]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(
            f"{unknown[0]}: not a valid key for mode {mode!r} "
            f"(valid keys: {', '.join(schema)})"
        )
    params = {}
    for key, f in schema.items():
        if key in raw:
            params[key] = _check_value(key, f, raw[key])
        elif f.required:
            raise ConfigError(f"{key}: required for mode {mode!r}")
        else:
            params[key] = f.default
    return params


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run: mode, canonical parameters, output options."""

    mode: str
    params: dict = dc_field(default_factory=dict)
    out_dir: str = "."
    dump_state: bool = False

    def canonical(self) -> dict:
        """Self-describing dict; re-parsing it yields an equal RunConfig."""
        out = {"mode": self.mode}
        for key, value in self.params.items():
            out[key] = list(value) if isinstance(value, tuple) else value
        return out


_FLAG_KEYS = ("seed", "delta_err", "realizations")


def parse_config(
    source=None,
    mode: str | None = None,
    overrides: dict | None = None,
    out_dir: str = ".",
    dump_state: bool = False,
) -> RunConfig:
    """Build a RunConfig from a config file/dict plus flag overrides.

    ``source`` is a JSON file path or an already-loaded dict; ``mode`` (the
    flag) takes precedence over the file's ``mode`` key.  Overrides are
    flag-level scalars (seed, delta_err, realizations) applied on top,
    rejected for modes that lack the key.

    Raises:
        ConfigError: Unknown keys, missing mode, or out-of-range values;
            the message names the offending key and the expected range.
    """
    if source is None:
        raw = {}
    elif isinstance(source, dict):
        raw = dict(source)
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {source}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config: top level must be a JSON object")
    file_mode = raw.pop("mode", None)
    if file_mode is not None and not isinstance(file_mode, str):
        raise ConfigError(f"mode: expected a string, got {file_mode!r}")
    use_mode = mode or file_mode
    if use_mode is None:
        raise ConfigError("mode: required (set --mode or a 'mode' config key)")
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _SCHEMAS.get(use_mode, {}):
            raise ConfigError(f"{key}: not a valid key for mode {use_mode!r}")
        raw[key] = value
    params = validate_params(use_mode, raw)
    return RunConfig(mode=use_mode, params=params, out_dir=out_dir, dump_state=dump_state)


# ----------------------------------------------------------------------
# sweep expansion


def child_seed(base: int, index: int) -> int:
    """Deterministic per-child seed derived from base seed and index."""
    return int(np.random.SeedSequence((int(base), int(index))).generate_state(1)[0])


@dataclass
class ChildRun:
    name: str
    params: dict
    seed: int | None = None


def expand_children(config: RunConfig) -> list[ChildRun]:
    """Expand sweep lists into scalar child runs with derived seeds."""
    p = config.params
    if config.mode in ("circuit", "pure-noise"):
        sweep_key = "rate"
    elif config.mode == "lindblad":
        sweep_key = "kappa"
    else:
        return [ChildRun(name=config.mode, params=dict(p), seed=p.get("seed"))]
    sites_list = p["sites"] if isinstance(p["sites"], tuple) else (p["sites"],)
    rate_list = p[sweep_key] if isinstance(p[sweep_key], tuple) else (p[sweep_key],)
    swept = isinstance(p["sites"], tuple) or isinstance(p[sweep_key], tuple)
    children = []
    tag = "p" if sweep_key == "rate" else "k"
    for index, (n, r) in enumerate(itertools.product(sites_list, rate_list)):
        child = dict(p)
        child["sites"] = n
        child[sweep_key] = r
        if "seed" in child:
            seed = child_seed(child["seed"], index) if swept else child["seed"]
            child["seed"] = seed
        else:
            seed = None
        name = f"N{n}_{tag}{r:g}" if swept else config.mode
        children.append(ChildRun(name=name, params=child, seed=seed))
    return children


# ----------------------------------------------------------------------
# per-mode runners


def _circuit_spec(p: dict, gates: bool = True, initial: str | None = None) -> CircuitSpec:
    return CircuitSpec(
        sites=p["sites"],
        depth=p["depth"],
        noise=p["noise"],
        rate=p["rate"],
        seed=p["seed"],
        delta_err=p.get("delta_err", 1e-6),
        initial=p["initial"] if initial is None else initial,
        gates_enabled=gates,
    )


def _lindblad_spec(p: dict) -> LindbladSpec:
    return LindbladSpec(
        sites=p["sites"],
        total_time=p["total_time"],
        ising=IsingParams(
            coupling=p["coupling"],
            transverse=p["transverse"],
            longitudinal=p["longitudinal"],
        ),
        noise=p["noise"],
        kappa=p["kappa"],
        dt=p["dt"],
        delta_err=p["delta_err"],
    )


def _norm_columns(series, drop_t0=True):
    keep = series.times > 1e-12 if drop_t0 else np.ones(series.times.size, bool)
    return series.times[keep], series.values[keep]


def _trace_csv_columns(trace, bound):
    cols = [
        ("t", trace.times[1:]),
        ("l2_norm", trace.l2_norm[1:]),
        ("l2_err", trace.l2_err[1:]),
    ]
    if trace.l1_err is not None:
        cols.append(("l1_err", trace.l1_err[1:]))
        cols.append(("lambda", trace.lambda_t[1:]))
    if bound is not None:
        cols.append(("bound", np.asarray(bound)[1:]))
    cols.append(("delta_sum", trace.delta_sum[1:]))
    cols.append(("max_rank", trace.max_rank[1:]))
    return cols


def _run_circuit_child(child: ChildRun, config: RunConfig, workers: int, out_base):
    p = child.params
    spec = _circuit_spec(p)
    ens = EnsembleConfig(realizations=p["realizations"])
    info: dict = {"csv": out_base.name + ".csv"}
    meta = {
        "dynamics": "circuit",
        "sites": p["sites"],
        "noise": p["noise"],
        "rate": p["rate"],
        "seed": p["seed"],
        "delta_err": p["delta_err"],
        "realizations": p["realizations"],
    }
    if p["trace_errors"]:
        trace = total_error_experiment(spec, ens, want_l1=p["l1"], workers=workers)
        bound = None
        if p["bound"]:
            with np.errstate(divide="ignore"):
                logs = np.log2(trace.l2_norm) / spec.sites
            fit = fit_decay(trace.times, logs)
            bound = circuit_bound_series(
                trace.times,
                trace.l2_norm,
                spec.delta_err,
                spec.sites,
                fit.gamma,
                fit.switch_time,
            )
            info["fit"] = fit.as_dict()
        write_csv(_csv_path(out_base), "error-trace", _trace_csv_columns(trace, bound), meta)
        info["renorm_checks"] = trace.meta["renorm_checks"]
        info["renorm_violations"] = trace.meta["renorm_violations"]
        info["trunc_bound_ratio_max"] = trace.meta["trunc_bound_ratio_max"]
    else:
        series = norm_decay_experiment(spec, ens, workers=workers)
        t, v = _norm_columns(series)
        meta["engine"] = series.meta["engine"]
        write_csv(_csv_path(out_base), "norm-decay", [("t", t), ("log2_norm_per_site", v)], meta)
    if config.dump_state:
        state = evolve_circuit_mps(spec, realization=0)
        state.save(out_base.parent / (out_base.name + "_state.npz"))
        info["state"] = out_base.name + "_state.npz"
    return info


def _run_lindblad_child(child: ChildRun, config: RunConfig, workers: int, out_base):
    p = child.params
    spec = _lindblad_spec(p)
    info: dict = {"csv": out_base.name + ".csv"}
    meta = {
        "dynamics": "lindblad",
        "sites": p["sites"],
        "noise": p["noise"],
        "kappa": p["kappa"],
        "dt": p["dt"],
        "delta_err": p["delta_err"],
    }
    if p["trace_errors"]:
        trace = total_error_experiment(spec, want_l1=p["l1"], workers=workers)
        bound = None
        if p["contraction"] is not None:
            norm_series = _trace_norm_series(trace)
            bound_series = empirical_bound_lindblad(spec, p["contraction"], norm_series)
            bound = np.concatenate([[0.0], bound_series.values])
            meta["contraction"] = p["contraction"]
        write_csv(_csv_path(out_base), "error-trace", _trace_csv_columns(trace, bound), meta)
        info["renorm_checks"] = trace.meta["renorm_checks"]
        info["renorm_violations"] = trace.meta["renorm_violations"]
        info["trunc_bound_ratio_max"] = trace.meta["trunc_bound_ratio_max"]
    else:
        series = norm_decay_experiment(spec)
        t, v = _norm_columns(series)
        write_csv(_csv_path(out_base), "norm-decay", [("t", t), ("log2_norm_per_site", v)], meta)
    if config.dump_state:
        state = evolve_lindblad(spec.initial_state(), spec)
        state.save(out_base.parent / (out_base.name + "_state.npz"))
        info["state"] = out_base.name + "_state.npz"
    return info


def _trace_norm_series(trace):
    from .experiments import TimeSeries

    return TimeSeries(trace.times, trace.l2_norm, meta={"quantity": "l2_norm"})


def _run_pure_child(child: ChildRun, config: RunConfig, workers: int, out_base):
    p = child.params
    initial = "ones" if p["noise"] == DAMPING else "zeros"
    spec = CircuitSpec(
        sites=p["sites"],
        depth=p["depth"],
        noise=p["noise"],
        rate=p["rate"],
        seed=p["seed"],
        delta_err=1e-6,
        initial=initial,
        gates_enabled=False,
    )
    series = norm_decay_experiment(spec, EnsembleConfig(realizations=1), workers=1)
    t, v = _norm_columns(series)
    if p["noise"] == DEPOLARIZING:
        closed = np.array([pure_depolarizing_log2_l2(p["rate"], int(ti)) for ti in t])
    else:
        closed = np.array([pure_damping_log2_l2(p["rate"], int(ti)) for ti in t])
    meta = {
        "dynamics": "pure",
        "sites": p["sites"],
        "noise": p["noise"],
        "rate": p["rate"],
        "initial": initial,
    }
    write_csv(
        _csv_path(out_base),
        "norm-decay",
        [("t", t), ("log2_norm_per_site", v), ("closed_form", closed)],
        meta,
    )
    return {"csv": out_base.name + ".csv"}


def _run_single_qubit(config: RunConfig, out_base):
    p = config.params
    omega, kappa = p["omega"], p["kappa"]
    times = np.linspace(0.0, p["total_time"], p["samples"])
    states = [rabi_damping_closed_form(omega, kappa, t) for t in times]
    cols = [
        ("t", times),
        ("rho00", np.array([s.rho00.real for s in states])),
        ("rho11", np.array([s.rho11.real for s in states])),
        ("re_rho01", np.array([s.rho01.real for s in states])),
        ("im_rho01", np.array([s.rho01.imag for s in states])),
        ("purity", np.array([s.purity() for s in states])),
    ]
    eta = kappa / omega
    meta = {"omega": omega, "kappa": kappa, "eta": eta}
    write_csv(_csv_path(out_base), "single-qubit", cols, meta)
    info = {"csv": out_base.name + ".csv", "eta": eta}
    if kappa > 0.0:
        info["steady_purity"] = rabi_damping_steady_purity(eta)
    return info


def _run_nscale(config: RunConfig, workers: int, out_base):
    p = config.params
    series = nscale_experiment(
        p["rate"],
        list(p["sites"]),
        depth=p["depth"],
        delta_err=p["delta_err"],
        noise=p["noise"],
        ens=EnsembleConfig(realizations=p["realizations"], base_seed=p["seed"]),
        workers=workers,
    )
    meta = {
        "noise": p["noise"],
        "rate": p["rate"],
        "depth": p["depth"],
        "delta_err": p["delta_err"],
        "realizations": p["realizations"],
        "seed": p["seed"],
    }
    write_csv(
        _csv_path(out_base),
        "nscale",
        [("sites", series.times), ("err_over_norm_sq", series.values)],
        meta,
    )
    return {
        "csv": out_base.name + ".csv",
        "origin_slope": series.meta["origin_slope"],
        "delta_sum_mean": series.meta["delta_sum_mean"],
    }


def _run_fit(config: RunConfig):
    p = config.params
    data = read_csv(p["input"])
    if data.kind != "norm-decay":
        raise ConfigError(f"input: expected a norm-decay CSV, found kind {data.kind!r}")
    if data.n_rows == 0:
        raise ConfigError(f"input: {p['input']} contains no data rows")
    times = data.columns["t"]
    values = data.columns["log2_norm_per_site"]
    fit = fit_decay(times, values, lam_ref=p["lam_ref"])
    return {"input": p["input"], "fit": fit.as_dict()}


def _run_sop(config: RunConfig, out_base):
    p = config.params
    if p["dynamics"] == "lindblad":
        spec = _lindblad_spec(p)
    else:
        spec = _circuit_spec(p, initial="zeros")
    series = sop_scan(spec, cut=p["cut"])
    meta = {
        "dynamics": p["dynamics"],
        "sites": p["sites"],
        "noise": p["noise"],
        "cut": series.meta["cut"],
    }
    write_csv(
        _csv_path(out_base),
        "sop",
        [("t", series.times), ("s_op", series.values)],
        meta,
    )
    return {"csv": out_base.name + ".csv", "max_s_op": float(series.values.max())}


# ----------------------------------------------------------------------
# dispatch


def _csv_path(base: Path) -> Path:
    return base.parent / (base.name + ".csv")


def run(config: RunConfig, workers: int = 1) -> dict:
    """Execute a validated config; write CSVs + manifest; return manifest."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    children = expand_children(config)
    entries = []
    for child in children:
        base = out_dir / f"{config.mode}_{child.name}" if child.name != config.mode else out_dir / config.mode
        if config.mode == "circuit":
            info = _run_circuit_child(child, config, workers, base)
        elif config.mode == "lindblad":
            info = _run_lindblad_child(child, config, workers, base)
        elif config.mode == "pure-noise":
            info = _run_pure_child(child, config, workers, base)
        elif config.mode == "single-qubit":
            info = _run_single_qubit(config, base)
        elif config.mode == "nscale":
            info = _run_nscale(config, workers, base)
        elif config.mode == "fit":
            info = _run_fit(config)
        else:
            info = _run_sop(config, base)
        entry = {"name": child.name, **info}
        if child.seed is not None:
            entry["seed"] = child.seed
        scalars = {
            k: v
            for k, v in child.params.items()
            if k in ("sites", "rate", "kappa") and not isinstance(v, tuple)
        }
        entry["params"] = scalars
        entries.append(entry)
    manifest = {
        "schema": 1,
        "version": __version__,
        "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "runtime_seconds": time.time() - started,
        "workers": workers,
        "config": config.canonical(),
        "children": entries,
    }
    write_manifest(out_dir / f"{config.mode}_manifest.json", manifest)
    return manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpodyn",
        description=(
            "Noisy many-body dynamics with truncated matrix-product density "
            "matrices: experiments, fits, and CSV/manifest output."
        ),
    )
    parser.add_argument("--config", help="JSON config file (one experiment)")
    parser.add_argument("--mode", choices=MODES, help="experiment mode")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, help="override the base seed")
    parser.add_argument("--workers", type=int, default=1, help="worker pool size")
    parser.add_argument(
        "--dump-state", action="store_true", help="save the final MPS state (npz)"
    )
    parser.add_argument("--delta-err", type=float, help="override delta_err")
    parser.add_argument(
        "--realizations", type=int, help="override the ensemble size"
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    overrides = {
        "seed": args.seed,
        "delta_err": args.delta_err,
        "realizations": args.realizations,
    }
    try:
        config = parse_config(
            source=args.config,
            mode=args.mode,
            overrides=overrides,
            out_dir=args.out,
            dump_state=args.dump_state,
        )
        if args.workers < 1:
            raise ConfigError(f"workers: expected a number >= 1, got {args.workers}")
        run(config, workers=args.workers)
    except tuple(cls for cls, _ in EXIT_CODES) as exc:
        code = next(c for cls, c in EXIT_CODES if isinstance(exc, cls))
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
