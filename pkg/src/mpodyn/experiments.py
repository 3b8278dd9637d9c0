"""Ensemble experiments: norm decay, truncation-error traces, and bounds.

Conventions shared by all experiments:

* Norm series report the per-site decay exponent ``(1/N) log2 ||rho_t||_2``.
* Ensembles average each quantity (norms, errors) arithmetically across
  realizations in realization order, then derived quantities (logs, ratios)
  are formed from the averages.
* For chains the dense oracle can hold (N <= 12), reference states are
  evolved densely; the truncation-free MPS route is numerically the same
  map and is cross-checked against the dense one in the test suite.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channels import (
    CircuitSpec,
    circuit_layers,
    noisy_circuit_step,
)
from .errors import ConfigError, NumericError, SizeGuardError
from .fitting import FitResult, detect_steady_start, steady_mean
from .lindblad import LindbladSpec, apply_trotter_step, trotter_step
from .oracle import (
    CIRCUIT_SITE_LIMIT,
    LINDBLAD_SITE_LIMIT,
    circuit_step_dense,
    dense_computational,
    l1_norm,
    l2_norm_dense,
    lindblad_step_dense,
)
from .state import DensityMPS


@dataclass(frozen=True)
class EnsembleConfig:
    """Ensemble size and seeding; aggregation is the arithmetic mean.

    ``base_seed = None`` falls back to the seed inside the spec.
    """

    realizations: int = 100
    base_seed: int | None = None

    def __post_init__(self):
        if self.realizations < 1:
            msg = f"realizations must be >= 1, got {self.realizations}"
            raise ConfigError(msg)


@dataclass
class TimeSeries:
    """Sampled scalar series with a metadata dictionary."""

    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.times.shape != self.values.shape:
            msg = f"times and values differ in shape: {self.times.shape} vs {self.values.shape}"
            raise NumericError(msg)
        if self.times.size >= 2 and not np.all(np.diff(self.times) > 0):
            msg = "times must be strictly increasing"
            raise NumericError(msg)
        if not np.all(np.isfinite(self.values)):
            msg = "series values must be finite"
            raise NumericError(msg)

    def value_at(self, t: float) -> float:
        idx = np.nonzero(np.abs(self.times - t) <= 1e-9)[0]
        if idx.size == 0:
            msg = f"no sample at t = {t:g}"
            raise NumericError(msg)
        return float(self.values[idx[0]])


@dataclass
class ErrorTrace:
    """Per-step norms, truncation errors, and bound bookkeeping of one run.

    Arrays are aligned with ``times``.  ``l1_err`` and ``lambda_t`` are None
    when the dense L1 bridge was not requested; ``bound`` is filled by the
    bound evaluators.  ``lambda_t`` entries are NaN where the L2 error
    vanishes.
    """

    times: np.ndarray
    l2_norm: np.ndarray
    l2_err: np.ndarray
    l1_err: np.ndarray | None
    lambda_t: np.ndarray | None
    delta_sum: np.ndarray
    max_rank: np.ndarray
    bound: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def _with_ensemble_seed(spec, ens: EnsembleConfig):
    if ens.base_seed is None:
        return spec
    return replace(spec, seed=ens.base_seed)


def _pool_map(fn, jobs, workers: int):
    """Map ``fn`` over argument tuples, preserving job order."""
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# ----------------------------------------------------------------------
# norm decay


def _circuit_norms_dense(spec: CircuitSpec, realization: int) -> np.ndarray:
    """Exact ||rho_t||_2 for t = 0..depth of one realization."""
    norms = np.empty(spec.depth + 1)
    norms[0] = 1.0
    channel = spec.channel()
    rho = dense_computational(
        [0 if spec.initial == "zeros" else 1] * spec.sites
    )
    for t, layer in enumerate(circuit_layers(spec, realization), start=1):
        rho = circuit_step_dense(rho, layer, channel, spec.sites)
        norms[t] = l2_norm_dense(rho)
    return norms


def _circuit_norms_mps(spec: CircuitSpec, realization: int) -> np.ndarray:
    norms = np.empty(spec.depth + 1)
    norms[0] = 1.0

    def observer(t, state, report):
        norms[t] = state.l2_norm()

    evolve_circuit_mps(spec, realization, observer)
    return norms


def evolve_circuit_mps(
    spec: CircuitSpec, realization: int = 0, observer=None
) -> DensityMPS:
    """Run the truncating MPS circuit algorithm for one realization.

    Applies gate + noise steps and, on scheduled steps, truncation followed
    by trace renormalization.  ``observer(t, state, report)`` sees the
    post-step state; ``report`` is None on steps without truncation.
    """
    channel = spec.channel()
    state = spec.initial_state()
    for t, layer in enumerate(circuit_layers(spec, realization), start=1):
        state = noisy_circuit_step(state, layer, channel)
        report = None
        if spec.truncates_at(t) and spec.delta_err > 0.0:
            state, report = state.truncate_and_renormalize(spec.delta_err)
        if observer is not None:
            observer(t, state, report)
    return state


def norm_decay_experiment(
    spec, ens: EnsembleConfig = EnsembleConfig(), workers: int = 1
) -> TimeSeries:
    """Ensemble-averaged per-site log2 L2 norm at every step.

    Circuit ensembles use the dense engine for N <= 12 (gate-free runs use
    the trivially cheap MPS route at any N); larger chains fall back to the
    truncating MPS algorithm, and the metadata records which engine ran.
    Lindblad dynamics is deterministic, so a single run is performed.
    """
    if isinstance(spec, LindbladSpec):
        return _norm_decay_lindblad(spec)
    spec = _with_ensemble_seed(spec, ens)
    if not spec.gates_enabled:
        engine, fn = "mps", _circuit_norms_mps
    elif spec.sites <= CIRCUIT_SITE_LIMIT:
        engine, fn = "dense", _circuit_norms_dense
    else:
        engine, fn = "mps", _circuit_norms_mps
    jobs = [(spec, r) for r in range(ens.realizations)]
    results = _pool_map(fn, jobs, workers)
    total = np.zeros(spec.depth + 1)
    for norms in results:
        total += norms
    mean = total / ens.realizations
    values = np.log2(mean) / spec.sites
    return TimeSeries(
        np.arange(spec.depth + 1, dtype=np.float64),
        values,
        meta={
            "quantity": "log2_l2_per_site",
            "sites": spec.sites,
            "noise": spec.noise,
            "rate": spec.rate,
            "realizations": ens.realizations,
            "engine": engine,
            "seed": spec.seed,
            "norm_mean": mean.tolist(),
        },
    )


def _norm_decay_lindblad(spec: LindbladSpec) -> TimeSeries:
    n_steps = spec.n_steps
    norms = np.empty(n_steps + 1)
    norms[0] = 1.0

    def observer(t, state, report):
        idx = int(round(t / spec.dt))
        norms[idx] = state.l2_norm()

    from .lindblad import evolve_lindblad

    evolve_lindblad(spec.initial_state(), spec, observer)
    times = np.arange(n_steps + 1, dtype=np.float64) * spec.dt
    return TimeSeries(
        times,
        np.log2(norms) / spec.sites,
        meta={
            "quantity": "log2_l2_per_site",
            "sites": spec.sites,
            "noise": spec.noise,
            "kappa": spec.kappa,
            "dt": spec.dt,
            "realizations": 1,
            "engine": "mps",
            "norm_mean": norms.tolist(),
        },
    )


# ----------------------------------------------------------------------
# total-error traces


def _instrumented_truncation(state, delta_err, n_sites, renormalize, stats):
    """Truncate (and optionally renormalize), recording bound diagnostics."""
    trunc, report = state.truncate(delta_err)
    pre_norm = report.pre_l2
    exact_bound = np.sqrt(2.0 * report.delta_sum) * pre_norm
    dist = state.l2_distance(trunc)
    # The inner-product distance cannot resolve below a few sqrt(eps)*norm
    # (truncation re-gauges the tensors even when it discards nothing), so
    # calls that discard (almost) nothing are checked against that floor
    # instead of producing a spurious 0/0 ratio.
    noise_floor = 1e-7 * max(pre_norm, 1e-300)
    if exact_bound > 10.0 * noise_floor:
        stats["bound_ratio_max"] = max(
            stats.get("bound_ratio_max", 0.0), dist / exact_bound
        )
    elif dist > exact_bound + noise_floor:
        stats["bound_ratio_max"] = np.inf
    if renormalize:
        out, factor = trunc.renormalize()
        report.trace_rescale = factor
    else:
        out = trunc
    if delta_err > 0.0:
        step_bound = np.sqrt(2.0 * (n_sites - 1) * delta_err) * pre_norm
        stats["renorm_checks"] = stats.get("renorm_checks", 0) + 1
        if state.l2_distance(out) > step_bound:
            stats["renorm_violations"] = stats.get("renorm_violations", 0) + 1
    return out, report


def _circuit_error_arrays(spec: CircuitSpec, realization: int, want_l1: bool):
    """Per-step norms/errors/truncation stats for one circuit realization."""
    n = spec.sites
    depth = spec.depth
    channel = spec.channel()
    layers = circuit_layers(spec, realization)
    rho = dense_computational([0 if spec.initial == "zeros" else 1] * n)
    sigma = spec.initial_state()
    out = {
        "norm": np.ones(depth + 1),
        "err2": np.zeros(depth + 1),
        "err1": np.zeros(depth + 1),
        "delta_sum": np.zeros(depth + 1),
        "max_rank": np.ones(depth + 1),
        "stats": {},
    }
    for t, layer in enumerate(layers, start=1):
        rho = circuit_step_dense(rho, layer, channel, n)
        sigma = noisy_circuit_step(sigma, layer, channel)
        if spec.truncates_at(t) and spec.delta_err > 0.0:
            sigma, report = _instrumented_truncation(
                sigma, spec.delta_err, n, True, out["stats"]
            )
            out["delta_sum"][t] = report.delta_sum
            out["max_rank"][t] = report.max_rank
        else:
            out["max_rank"][t] = max(sigma.bond_dims)
        out["norm"][t] = l2_norm_dense(rho)
        # Without truncation the two routes coincide in exact arithmetic;
        # report that identity rather than route round-off.
        if spec.delta_err > 0.0:
            diff = rho - sigma.to_dense_operator()
            out["err2"][t] = l2_norm_dense(diff)
            if want_l1:
                out["err1"][t] = l1_norm(_hermitize(diff))
    return out


def _hermitize(diff: np.ndarray) -> np.ndarray:
    # The difference of two density operators is Hermitian in exact
    # arithmetic, but the truncated route's reconstruction carries a small
    # anti-Hermitian SVD residue that accumulates with step count; project
    # it out so the trace norm sees the operator the bound speaks about.
    return (diff + diff.conj().T) / 2.0


def _lindblad_error_arrays(spec: LindbladSpec, want_l1: bool):
    n = spec.sites
    steps = spec.n_steps
    step = trotter_step(spec)
    rho = dense_computational([0] * n)
    sigma = spec.initial_state()
    out = {
        "norm": np.ones(steps + 1),
        "err2": np.zeros(steps + 1),
        "err1": np.zeros(steps + 1),
        "delta_sum": np.zeros(steps + 1),
        "max_rank": np.ones(steps + 1),
        "stats": {},
    }
    for t in range(1, steps + 1):
        rho = lindblad_step_dense(rho, step)
        sigma = apply_trotter_step(sigma, step)
        if spec.truncates_at(t) and spec.delta_err > 0.0:
            sigma, report = _instrumented_truncation(
                sigma, spec.delta_err, n, True, out["stats"]
            )
            out["delta_sum"][t] = report.delta_sum
            out["max_rank"][t] = report.max_rank
        else:
            out["max_rank"][t] = max(sigma.bond_dims)
        out["norm"][t] = l2_norm_dense(rho)
        if spec.delta_err > 0.0:
            diff = rho - sigma.to_dense_operator()
            out["err2"][t] = l2_norm_dense(diff)
            if want_l1:
                out["err1"][t] = l1_norm(_hermitize(diff))
    return out


def total_error_experiment(
    spec,
    ens: EnsembleConfig = EnsembleConfig(),
    want_l1: bool = True,
    workers: int = 1,
) -> ErrorTrace:
    """Evolve the truncating algorithm against the exact reference.

    Produces the full error trace: exact norms, L2/L1 truncation errors,
    the ratio indicator ``lambda_t = (L1/L2 error) * ||rho_t||_2``, per-step
    discarded weights, and bound violation counters (in ``meta``).

    Raises:
        SizeGuardError: When the chain exceeds the dense reference limit.
    """
    if isinstance(spec, LindbladSpec):
        if spec.sites > LINDBLAD_SITE_LIMIT:
            msg = f"total-error Lindblad runs need N <= {LINDBLAD_SITE_LIMIT}"
            raise SizeGuardError(msg)
        results = [_lindblad_error_arrays(spec, want_l1)]
        times = np.arange(spec.n_steps + 1, dtype=np.float64) * spec.dt
        realizations = 1
        meta_extra = {"kappa": spec.kappa, "dt": spec.dt}
    else:
        if spec.sites > CIRCUIT_SITE_LIMIT:
            msg = f"total-error circuit runs need N <= {CIRCUIT_SITE_LIMIT}"
            raise SizeGuardError(msg)
        spec = _with_ensemble_seed(spec, ens)
        jobs = [(spec, r, want_l1) for r in range(ens.realizations)]
        results = _pool_map(_circuit_error_arrays, jobs, workers)
        times = np.arange(spec.depth + 1, dtype=np.float64)
        realizations = ens.realizations
        meta_extra = {"rate": spec.rate, "seed": spec.seed}

    keys = ("norm", "err2", "err1", "delta_sum")
    acc = {k: np.zeros_like(results[0][k]) for k in keys}
    max_rank = np.zeros_like(results[0]["max_rank"])
    ratio_max = 0.0
    checks = 0
    violations = 0
    for res in results:
        for k in keys:
            acc[k] += res[k]
        max_rank = np.maximum(max_rank, res["max_rank"])
        ratio_max = max(ratio_max, res["stats"].get("bound_ratio_max", 0.0))
        checks += res["stats"].get("renorm_checks", 0)
        violations += res["stats"].get("renorm_violations", 0)
    for k in keys:
        acc[k] /= realizations

    l1_arr = acc["err1"] if want_l1 else None
    lam = None
    if want_l1:
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(
                acc["err2"] > 0.0, acc["err1"] / acc["err2"] * acc["norm"], np.nan
            )
    return ErrorTrace(
        times=times,
        l2_norm=acc["norm"],
        l2_err=acc["err2"],
        l1_err=l1_arr,
        lambda_t=lam,
        delta_sum=acc["delta_sum"],
        max_rank=max_rank,
        meta={
            "sites": spec.sites,
            "noise": spec.noise,
            "delta_err": spec.delta_err,
            "realizations": realizations,
            "trunc_bound_ratio_max": ratio_max,
            "renorm_checks": checks,
            "renorm_violations": violations,
            **meta_extra,
        },
    )


# ----------------------------------------------------------------------
# single-step truncation


def _circuit_single_step_arrays(spec: CircuitSpec, realization: int, te: int):
    n = spec.sites
    channel = spec.channel()
    layers = circuit_layers(spec, realization)
    rho = dense_computational([0 if spec.initial == "zeros" else 1] * n)
    sigma = None
    norms = np.ones(spec.depth + 1)
    errs = np.zeros(spec.depth + 1)
    for t, layer in enumerate(layers, start=1):
        rho = circuit_step_dense(rho, layer, channel, n)
        if sigma is not None:
            sigma = circuit_step_dense(sigma, layer, channel, n)
        if t == te and spec.delta_err > 0.0:
            mps = DensityMPS.from_dense_operator(rho, n)
            trunc, _ = mps.truncate(spec.delta_err)
            sigma = trunc.to_dense_operator()
        norms[t] = l2_norm_dense(rho)
        if sigma is not None:
            errs[t] = l2_norm_dense(rho - sigma)
    return {"norm": norms, "err2": errs}


def single_step_truncation_experiment(
    spec,
    te,
    ens: EnsembleConfig = EnsembleConfig(),
    workers: int = 1,
) -> TimeSeries:
    """Error series of a run truncated exactly once, at time ``te``.

    Before ``te`` the truncated branch coincides with the reference; at
    ``te`` a single truncation (with trace renormalization in the Lindblad
    variant, without for circuits) creates the error, which then evolves
    freely — its decay isolates the noise-induced contraction.

    The metadata carries the ensemble-mean reference norms under "norms".

    Raises:
        SizeGuardError: When the exact reference is infeasible at this N.
    """
    if isinstance(spec, LindbladSpec):
        te_steps = te / spec.dt
        if abs(te_steps - round(te_steps)) > 1e-9 or not (
            0 < round(te_steps) <= spec.n_steps
        ):
            msg = f"te = {te} must be a step multiple within (0, {spec.total_time}]"
            raise NumericError(msg)
        if spec.sites > LINDBLAD_SITE_LIMIT:
            msg = f"single-step Lindblad reference limited to {LINDBLAD_SITE_LIMIT} sites"
            raise SizeGuardError(msg)
        res = _lindblad_single_step_arrays(spec, int(round(te_steps)))
        times = np.arange(spec.n_steps + 1, dtype=np.float64) * spec.dt
        norm_mean, err_mean = res["norm"], res["err2"]
        realizations = 1
    else:
        if not 0 < te <= spec.depth:
            msg = f"te = {te} outside the run depth {spec.depth}"
            raise NumericError(msg)
        if spec.sites > CIRCUIT_SITE_LIMIT:
            msg = f"single-step circuit reference limited to {CIRCUIT_SITE_LIMIT} sites"
            raise SizeGuardError(msg)
        spec = _with_ensemble_seed(spec, ens)
        jobs = [(spec, r, int(te)) for r in range(ens.realizations)]
        results = _pool_map(_circuit_single_step_arrays, jobs, workers)
        norm_mean = sum(res["norm"] for res in results) / ens.realizations
        err_mean = sum(res["err2"] for res in results) / ens.realizations
        times = np.arange(spec.depth + 1, dtype=np.float64)
        realizations = ens.realizations
    return TimeSeries(
        times,
        err_mean,
        meta={
            "quantity": "l2_error_single_step",
            "te": float(te),
            "sites": spec.sites,
            "noise": spec.noise,
            "delta_err": spec.delta_err,
            "realizations": realizations,
            "norms": norm_mean.tolist(),
        },
    )


def _lindblad_single_step_arrays(spec: LindbladSpec, te_step: int):
    n = spec.sites
    steps = spec.n_steps
    step = trotter_step(spec)
    rho = dense_computational([0] * n)
    sigma = None
    norms = np.ones(steps + 1)
    errs = np.zeros(steps + 1)
    for t in range(1, steps + 1):
        rho = lindblad_step_dense(rho, step)
        if sigma is not None:
            sigma = lindblad_step_dense(sigma, step)
        if t == te_step and spec.delta_err > 0.0:
            mps = DensityMPS.from_dense_operator(rho, n)
            trunc, _ = mps.truncate(spec.delta_err)
            renormed, _ = trunc.renormalize()
            sigma = renormed.to_dense_operator()
        norms[t] = l2_norm_dense(rho)
        if sigma is not None:
            errs[t] = l2_norm_dense(rho - sigma)
    return {"norm": norms, "err2": errs}


# ----------------------------------------------------------------------
# empirical bounds


def _bound_prefactor(n_sites: int, delta_err: float) -> float:
    return float(np.sqrt(2.0 * (n_sites - 1) * delta_err))


def circuit_bound_series(
    times, norms, delta_err: float, n_sites: int, gamma: float, switch_time: float
) -> np.ndarray:
    """Two-branch circuit error bound evaluated on measured norms.

    Early branch (t <= switch): prefactor * t * ||rho_t||; late branch:
    the contracted-accumulation form with contraction factor 2**(-gamma*N)
    per step.
    """
    if gamma <= 0.0:
        msg = f"decay rate must be positive, got {gamma}"
        raise NumericError(msg)
    t = np.asarray(times, dtype=np.float64)
    nrm = np.asarray(norms, dtype=np.float64)
    pref = _bound_prefactor(n_sites, delta_err)
    q = 2.0 ** (-gamma * n_sites)
    out = np.empty_like(t)
    early = t <= switch_time + 1e-9
    out[early] = pref * t[early] * nrm[early]
    tl = t[~early]
    decay = q ** (tl - switch_time)
    out[~early] = pref * (decay * switch_time + (1.0 - decay) / (1.0 - q)) * nrm[~early]
    return out


def empirical_bound_circuit(
    n_sites: int,
    t: float,
    delta_err: float,
    gamma: float,
    lam: float,
    switch_time: float,
    norm_series: TimeSeries,
) -> float:
    """The circuit error bound at one time, looking the norm up in a series.

    ``norm_series`` may carry raw norms or per-site log2 norms (decided by
    its ``quantity`` metadata tag).

    Raises:
        NumericError: If the series has no sample at ``t``.
    """
    if t < 1.0:
        msg = f"bound defined for t >= 1, got {t}"
        raise NumericError(msg)
    value = norm_series.value_at(t)
    if norm_series.meta.get("quantity") == "log2_l2_per_site":
        value = 2.0 ** (n_sites * value)
    del lam  # the plateau enters only through switch_time
    return float(
        circuit_bound_series(
            [t], [value], delta_err, n_sites, gamma, switch_time
        )[0]
    )


def empirical_bound_lindblad(
    spec: LindbladSpec, contraction: float, norm_series: TimeSeries
) -> TimeSeries:
    """Accumulated-contraction error bound for a Lindblad run.

    Evaluates ``prefactor * sum_j q**(m-j) * ||rho_{j dt}||`` at every step
    ``m``, with ``q = 2**(-contraction * N * dt)``, on the measured norms.

    Raises:
        NumericError: If ``contraction <= 0`` or the series does not sample
            every step up to its end.
    """
    if contraction <= 0.0:
        msg = f"contraction rate must be positive, got {contraction} (not established)"
        raise NumericError(msg)
    t = norm_series.times
    v = norm_series.values
    if norm_series.meta.get("quantity") == "log2_l2_per_site":
        v = 2.0 ** (spec.sites * v)
    keep = t > 1e-12
    t, v = t[keep], v[keep]
    uniform = t.size > 0 and abs(t[0] - spec.dt) <= 1e-9
    if uniform and t.size > 1:
        uniform = bool(np.max(np.abs(np.diff(t) - spec.dt)) <= 1e-9)
    if not uniform:
        msg = "norm series must sample every step dt, 2*dt, ..."
        raise NumericError(msg)
    pref = _bound_prefactor(spec.sites, spec.delta_err)
    q = 2.0 ** (-contraction * spec.sites * spec.dt)
    acc = 0.0
    out = np.empty_like(v)
    for j in range(v.size):
        acc = q * acc + v[j]
        out[j] = pref * acc
    return TimeSeries(
        t,
        out,
        meta={
            "quantity": "l2_error_bound",
            "sites": spec.sites,
            "contraction": contraction,
            "delta_err": spec.delta_err,
        },
    )


def lindblad_steady_bound(
    spec: LindbladSpec, contraction: float, steady_norm: float
) -> float:
    """Closed-form steady-state limit of the Lindblad error bound."""
    if contraction <= 0.0:
        msg = f"contraction rate must be positive, got {contraction} (not established)"
        raise NumericError(msg)
    q = 2.0 ** (-contraction * spec.sites * spec.dt)
    return _bound_prefactor(spec.sites, spec.delta_err) / (1.0 - q) * steady_norm


# ----------------------------------------------------------------------
# L1 comparison report


@dataclass
class L1Report:
    """Measured L1 errors against the empirical and naive conversions.

    Row arrays align with ``times``; rows before the first truncation have
    NaN in the empirical column.  ``steady_improvement`` is the rank factor
    applied to the predictive L2 budget divided by the L1 error actually
    incurred, averaged over the steady window.
    """

    times: np.ndarray
    measured_l1: np.ndarray
    empirical_bound: np.ndarray
    naive_bound: np.ndarray
    steady_tvd_bound: float
    lambda_inf: float
    steady_start: float
    steady_improvement: float


def l1_bound_report(trace: ErrorTrace, fit: FitResult) -> L1Report:
    """Tabulate the L1 error against its empirical and naive bounds.

    The empirical column converts the L2 bound through the measured ratio
    indicator (``lambda_t * bound / ||rho_t||``); the naive column applies
    the worst-case rank factor ``2**(N/2)`` to the measured L2 error.  The
    steady-state constant uses the all-time envelope of the late branch
    with the steady ``lambda`` estimate.

    ``steady_improvement`` measures how far the worst-case conversion
    overshoots reality: the rank factor applied to the predictive L2
    budget, divided by the L1 error actually incurred, both averaged over
    the steady window.  Because the budget and the error ratio are both
    O(1) relative to their norms, this factor itself scales as
    ``2**(N/2)``.
    """
    if trace.l1_err is None or trace.lambda_t is None:
        msg = "trace lacks the L1 column needed for the report"
        raise ConfigError(msg)
    n = int(trace.meta["sites"])
    delta = float(trace.meta["delta_err"])
    bound = circuit_bound_series(
        trace.times, trace.l2_norm, delta, n, fit.gamma, fit.switch_time
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        empirical = np.where(
            trace.l2_norm > 0.0, trace.lambda_t * bound / trace.l2_norm, np.nan
        )
    naive = 2.0 ** (n / 2.0) * trace.l2_err
    steady_start = 2.0 * fit.switch_time
    lam_inf = steady_mean(trace.times, trace.lambda_t, steady_start)
    q = 2.0 ** (-fit.gamma * n)
    steady_tvd = (
        _bound_prefactor(n, delta)
        * (fit.switch_time + 1.0 / (1.0 - q))
        * lam_inf
    )
    steady_bound = steady_mean(trace.times, bound, steady_start)
    steady_l1 = steady_mean(trace.times, trace.l1_err, steady_start)
    improvement = (
        2.0 ** (n / 2.0) * steady_bound / steady_l1 if steady_l1 > 0.0 else np.nan
    )
    return L1Report(
        times=trace.times,
        measured_l1=trace.l1_err,
        empirical_bound=empirical,
        naive_bound=naive,
        steady_tvd_bound=float(steady_tvd),
        lambda_inf=float(lam_inf),
        steady_start=float(steady_start),
        steady_improvement=improvement,
    )


def lambda_steady(trace: ErrorTrace, steady_start: float) -> float:
    """Steady ``lambda`` estimate: final-quarter mean past ``steady_start``."""
    if trace.lambda_t is None:
        msg = "trace lacks the L1 column needed for lambda"
        raise ConfigError(msg)
    return steady_mean(trace.times, trace.lambda_t, steady_start)


def lindblad_steady_start(trace: ErrorTrace) -> float:
    """Steady-state onset of a Lindblad trace via the norm flatness test."""
    n = int(trace.meta["sites"])
    return detect_steady_start(trace.times, np.log2(trace.l2_norm) / n)


# ----------------------------------------------------------------------
# system-size scaling


def nscale_experiment(
    rate: float,
    sites_list,
    depth: int = 2,
    delta_err: float = 1e-6,
    noise: str = "depolarizing",
    ens: EnsembleConfig = EnsembleConfig(realizations=24),
    workers: int = 1,
) -> TimeSeries:
    """Squared relative truncation error after ``depth`` steps, versus N.

    The reference is the truncation-free MPS run (cheap at small depth);
    errors and norms are ensemble-averaged separately and the reported
    value is ``(mean error / mean norm)**2``.  The zero-intercept linear
    fit slope is recorded in the metadata.
    """
    sites_list = [int(n) for n in sites_list]
    if sorted(set(sites_list)) != sites_list:
        msg = "sites_list must be strictly increasing"
        raise ConfigError(msg)
    values = []
    deltas = []
    for n in sites_list:
        spec = CircuitSpec(
            sites=n,
            depth=depth,
            noise=noise,
            rate=rate,
            seed=0 if ens.base_seed is None else ens.base_seed,
            delta_err=delta_err,
        )
        jobs = [(spec, r) for r in range(ens.realizations)]
        results = _pool_map(_nscale_single, jobs, workers)
        err = sum(r[0] for r in results) / ens.realizations
        norm = sum(r[1] for r in results) / ens.realizations
        dsum = sum(r[2] for r in results) / ens.realizations
        values.append((err / norm) ** 2)
        deltas.append(dsum)
    times = np.asarray(sites_list, dtype=np.float64)
    vals = np.asarray(values)
    slope = float((times * vals).sum() / (times * times).sum())
    return TimeSeries(
        times,
        vals,
        meta={
            "quantity": "err_over_norm_sq",
            "rate": rate,
            "noise": noise,
            "depth": depth,
            "delta_err": delta_err,
            "realizations": ens.realizations,
            "origin_slope": slope,
            "delta_sum_mean": deltas,
        },
    )


def _nscale_single(spec: CircuitSpec, realization: int):
    channel = spec.channel()
    sigma = spec.initial_state()
    ref = spec.initial_state()
    dsum = 0.0
    for layer in circuit_layers(spec, realization):
        ref = noisy_circuit_step(ref, layer, channel)
        sigma = noisy_circuit_step(sigma, layer, channel)
        sigma, report = sigma.truncate_and_renormalize(spec.delta_err)
        dsum += report.delta_sum
    return ref.l2_distance(sigma), ref.l2_norm(), dsum


# ----------------------------------------------------------------------
# operator entanglement


def sop_scan(spec, cut: int | None = None, realization: int = 0) -> TimeSeries:
    """Operator-space entanglement across a cut, per step.

    Works for both circuit and Lindblad specs; the state follows the
    truncating algorithm.  The initial product state contributes S = 0 at
    t = 0.
    """
    if cut is None:
        cut = spec.sites // 2
    if not 1 <= cut <= spec.sites - 1:
        msg = f"cut {cut} out of range for {spec.sites} sites"
        raise NumericError(msg)
    values = [0.0]
    times = [0.0]

    if isinstance(spec, LindbladSpec):
        from .lindblad import evolve_lindblad

        def observer(t, state, report):
            times.append(t)
            values.append(state.operator_entanglement(cut))

        evolve_lindblad(spec.initial_state(), spec, observer)
    else:

        def observer(t, state, report):
            times.append(float(t))
            values.append(state.operator_entanglement(cut))

        evolve_circuit_mps(spec, realization, observer)
    return TimeSeries(
        np.asarray(times),
        np.asarray(values),
        meta={
            "quantity": "operator_entanglement",
            "sites": spec.sites,
            "cut": cut,
            "noise": spec.noise,
        },
    )
