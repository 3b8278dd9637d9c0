"""Rate extraction from norm-decay and error-contraction series.

Norm series are per-site ``(1/N) log2 ||rho_t||_2``.  The early regime
decays linearly with rate ``gamma``; past the switch time ``T_s`` the
series plateaus at ``-lam``.  Fit windows follow a two-pass scheme:
provisional rates from fixed windows give a provisional ``T_s``, which then
places the final early window ``[2, max(3, T_s/2)]`` and late window
``[1.5 T_s, end]``, keeping the small-depth transient and the crossover
region out of both fits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FitWindowError, NumericError


@dataclass
class FitResult:
    """Fitted decay parameters of one norm series.

    Attributes:
        gamma: Early-time decay rate (per step, base-2, per site).
        lam: Late-time plateau value with its sign flipped (so ``lam >= 0``).
        switch_time: ``floor(lam / gamma)``, at least 1.
        s_rate: Late-time relaxation rate of the deviation from the plateau,
            or None when too few usable points exist.
        contraction: Post-truncation error contraction rate, filled by
            :func:`fit_contraction` based results, else None.
        c: Slope of a ``gamma = c * p`` sweep regression, filled at sweep
            level, else None.
        early_window: (t_lo, t_hi) of the early fit.
        late_window: (t_lo, t_hi) of the late mean.
        early_residual: RMS residual of the early linear fit.
    """

    gamma: float
    lam: float
    switch_time: float
    s_rate: float | None = None
    contraction: float | None = None
    c: float | None = None
    early_window: tuple[float, float] = (0.0, 0.0)
    late_window: tuple[float, float] = (0.0, 0.0)
    early_residual: float = 0.0

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "lam": self.lam,
            "switch_time": self.switch_time,
            "s_rate": self.s_rate,
            "contraction": self.contraction,
            "c": self.c,
            "early_window": list(self.early_window),
            "late_window": list(self.late_window),
            "early_residual": self.early_residual,
        }


def _window_mask(t: np.ndarray, lo: float, hi: float) -> np.ndarray:
    return (t >= lo - 1e-9) & (t <= hi + 1e-9)


def _linear_fit(t: np.ndarray, v: np.ndarray) -> tuple[float, float, float]:
    """Least-squares line; returns (slope, intercept, rms residual)."""
    slope, intercept = np.polyfit(t, v, 1)
    resid = v - (slope * t + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def fit_decay(
    times,
    values,
    lam_ref: float | None = None,
) -> FitResult:
    """Fit early decay rate, plateau, and late relaxation of a norm series.

    Args:
        times: Sample times (steps or physical time), increasing.
        values: Per-site base-2 log norms at those times.
        lam_ref: Plateau reference.  It anchors the late-relaxation fit and
            the window placement; pass 1/2 for depolarizing dynamics, where
            the steady state is known.  When the series is too short to
            reach the plateau, a supplied ``lam_ref`` switches the fit to a
            gamma-only mode (``lam`` is taken from the reference and no
            late fit is attempted) instead of raising.

    Raises:
        FitWindowError: When a window has too few points, or the series
            does not cover the plateau regime and no ``lam_ref`` is given.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.size != v.size or t.size < 4:
        msg = f"series too short to fit ({t.size} points)"
        raise FitWindowError(msg)
    if not np.all(np.isfinite(v)):
        msg = "series contains non-finite values"
        raise NumericError(msg)
    t_max = float(t[-1])

    # Pass 1: provisional rates from fixed windows.
    mask = _window_mask(t, 2.0, 5.0)
    if mask.sum() < 2:
        msg = "early window [2, 5] has fewer than 2 points"
        raise FitWindowError(msg)
    slope0, _, _ = _linear_fit(t[mask], v[mask])
    gamma0 = -slope0
    if gamma0 <= 0.0:
        msg = "no decay in the provisional early window [2, 5]"
        raise FitWindowError(msg)
    if lam_ref is not None:
        lam0 = float(lam_ref)
    else:
        tail = max(3, t.size // 10)
        lam0 = float(-np.mean(v[-tail:]))
        lam0 = min(max(lam0, 0.0), 0.5)
    ts0 = max(1.0, np.floor(lam0 / gamma0))
    gamma_only = t_max < 2.0 * ts0 - 1e-9
    if gamma_only and lam_ref is None:
        msg = (
            f"series ends at t = {t_max:g} but needs >= {2 * ts0:g} "
            f"to cover the plateau (provisional switch time {ts0:g})"
        )
        raise FitWindowError(msg)

    # Pass 2: final windows.
    early = (2.0, min(max(3.0, np.floor(ts0 / 2.0)), t_max))
    mask = _window_mask(t, *early)
    if mask.sum() < 2:
        msg = f"early window [{early[0]:g}, {early[1]:g}] has fewer than 2 points"
        raise FitWindowError(msg)
    slope, _, resid = _linear_fit(t[mask], v[mask])
    gamma = -slope
    if gamma <= 0.0:
        msg = f"no decay in the early window [{early[0]:g}, {early[1]:g}]"
        raise FitWindowError(msg)
    if gamma_only:
        return FitResult(
            gamma=float(gamma),
            lam=lam0,
            switch_time=max(1.0, np.floor(lam0 / gamma)),
            early_window=(float(early[0]), float(early[1])),
            early_residual=resid,
        )
    late = (np.ceil(1.5 * ts0), t_max)
    mask_late = _window_mask(t, *late)
    if mask_late.sum() < 2:
        msg = f"late window [{late[0]:g}, {late[1]:g}] has fewer than 2 points"
        raise FitWindowError(msg)
    lam = float(-np.mean(v[mask_late]))
    switch = max(1.0, np.floor(lam / gamma))

    # Late relaxation of the deviation from the plateau (optional).
    lam_used = lam if lam_ref is None else lam_ref
    dev = v[mask_late] + lam_used
    t_late = t[mask_late]
    usable = dev > 1e-12
    s_rate = None
    if usable.sum() >= 3:
        s_slope, _, _ = _linear_fit(t_late[usable], np.log(dev[usable]))
        if s_slope < 0.0:
            s_rate = float(-s_slope)

    return FitResult(
        gamma=float(gamma),
        lam=lam,
        switch_time=float(switch),
        s_rate=s_rate,
        early_window=(float(early[0]), float(early[1])),
        late_window=(float(late[0]), float(late[1])),
        early_residual=resid,
    )


def regress_through_origin(ps, gammas) -> float:
    """Slope ``c`` of the zero-intercept regression ``gamma = c * p``."""
    p = np.asarray(ps, dtype=np.float64)
    g = np.asarray(gammas, dtype=np.float64)
    if p.size != g.size or p.size < 1:
        msg = "need matching, nonempty rate and coefficient arrays"
        raise FitWindowError(msg)
    denom = float((p * p).sum())
    if denom == 0.0:
        msg = "all rates are zero; regression undefined"
        raise NumericError(msg)
    return float((p * g).sum() / denom)


@dataclass
class ContractionFit:
    """Longest log-linear segment of a post-truncation error series.

    ``rate`` is the contraction exponent per site and unit time: the error
    shrinks as ``2**(-rate * N * t)`` over the fitted window.
    """

    rate: float
    window: tuple[float, float]
    r_squared: float
    points: int
    secondary: "ContractionFit | None" = None

    def as_dict(self) -> dict:
        out = {
            "rate": self.rate,
            "window": list(self.window),
            "r_squared": self.r_squared,
            "points": self.points,
        }
        if self.secondary is not None:
            out["secondary"] = self.secondary.as_dict()
        return out


def _scan_linear_windows(
    t: np.ndarray, y: np.ndarray, r2_threshold: float, min_points: int
) -> tuple[int, int, float, float] | None:
    """Longest contiguous window with linear R^2 above the threshold.

    Returns (start, stop inclusive, slope, r2) or None.  Earliest window
    wins among equals.
    """
    n = t.size
    if n < min_points:
        return None
    best = None
    # Prefix sums make each window's regression O(1).
    c_t = np.concatenate([[0.0], np.cumsum(t)])
    c_tt = np.concatenate([[0.0], np.cumsum(t * t)])
    c_y = np.concatenate([[0.0], np.cumsum(y)])
    c_yy = np.concatenate([[0.0], np.cumsum(y * y)])
    c_ty = np.concatenate([[0.0], np.cumsum(t * y)])
    for i in range(n - min_points + 1):
        js = np.arange(i + min_points - 1, n)
        m = (js - i + 1).astype(np.float64)
        st = c_t[js + 1] - c_t[i]
        stt = c_tt[js + 1] - c_tt[i]
        sy = c_y[js + 1] - c_y[i]
        syy = c_yy[js + 1] - c_yy[i]
        sty = c_ty[js + 1] - c_ty[i]
        sxx = stt - st * st / m
        sxy = sty - st * sy / m
        syy_c = syy - sy * sy / m
        with np.errstate(divide="ignore", invalid="ignore"):
            r2 = np.where(
                (sxx > 0) & (syy_c > 0), (sxy * sxy) / (sxx * syy_c), 0.0
            )
        ok = np.nonzero(r2 >= r2_threshold)[0]
        if ok.size:
            j = int(js[ok[-1]])  # longest window starting at i
            length = j - i + 1
            if best is None or length > best[0]:
                idx = ok[-1]
                slope = float(sxy[idx] / sxx[idx])
                best = (length, i, j, slope, float(r2[idx]))
    if best is None:
        return None
    _, i, j, slope, r2 = best
    return i, j, slope, r2


def fit_contraction(
    times,
    errors,
    n_sites: int,
    t_min: float,
    r2_threshold: float = 0.995,
    min_points: int = 5,
) -> ContractionFit:
    """Fit the contraction rate of a post-truncation error series.

    Args:
        times: Sample times.
        errors: L2 errors (linear scale, positive where fitted).
        n_sites: Chain length N used to normalize the rate.
        t_min: Only samples with ``t > t_min`` enter the fit.
        r2_threshold: Window qualification threshold.
        min_points: Minimum points per window.

    Raises:
        FitWindowError: If no qualifying window exists.
    """
    t = np.asarray(times, dtype=np.float64)
    e = np.asarray(errors, dtype=np.float64)
    mask = (t > t_min + 1e-9) & (e > 0.0) & np.isfinite(e)
    t = t[mask]
    y = np.log2(e[mask])
    found = _scan_linear_windows(t, y, r2_threshold, min_points)
    if found is None:
        msg = (
            f"no window of >= {min_points} points after t = {t_min:g} has "
            f"log-linear R^2 >= {r2_threshold}"
        )
        raise FitWindowError(msg)
    i, j, slope, r2 = found
    primary = ContractionFit(
        rate=float(-slope / n_sites),
        window=(float(t[i]), float(t[j])),
        r_squared=r2,
        points=j - i + 1,
    )
    # A later, distinct segment (two-stage decay) if the tail supports one.
    rest_t, rest_y = t[j + 1 :], y[j + 1 :]
    tail = _scan_linear_windows(rest_t, rest_y, r2_threshold, max(min_points, 6))
    if tail is not None:
        i2, j2, slope2, r22 = tail
        primary.secondary = ContractionFit(
            rate=float(-slope2 / n_sites),
            window=(float(rest_t[i2]), float(rest_t[j2])),
            r_squared=r22,
            points=j2 - i2 + 1,
        )
    return primary


def detect_steady_start(
    times, values, slope_tol: float = 1e-4, window: float = 2.0
) -> float:
    """Earliest time from which a series stays flat.

    Flatness means every finite-difference slope inside ``[t0, t0 + window]``
    is below ``slope_tol`` in magnitude, and the slope stays below the
    tolerance from there to the end of the series.

    Raises:
        FitWindowError: If the series never settles.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.size < 3:
        msg = "series too short for steady-state detection"
        raise FitWindowError(msg)
    slopes = np.abs(np.diff(v) / np.diff(t))
    flat = slopes < slope_tol
    # suffix_flat[i]: every slope from i on is below tolerance.
    suffix_flat = np.concatenate([np.logical_and.accumulate(flat[::-1])[::-1], [True]])
    for i in range(t.size):
        if t[i] + window <= t[-1] + 1e-9 and suffix_flat[i]:
            return float(t[i])
    msg = f"series never satisfies |slope| < {slope_tol} through a {window:g}-wide window"
    raise FitWindowError(msg)


def steady_mean(times, values, t_start: float) -> float:
    """Mean over the final quarter of the window ``[t_start, end]``."""
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    t_end = float(t[-1])
    if t_end < t_start:
        msg = f"steady window start {t_start:g} beyond series end {t_end:g}"
        raise FitWindowError(msg)
    lo = t_start + 0.75 * (t_end - t_start)
    mask = t >= lo - 1e-9
    sel = v[mask]
    sel = sel[np.isfinite(sel)]
    if sel.size == 0:
        msg = "no finite values in the steady-state quarter window"
        raise FitWindowError(msg)
    return float(np.mean(sel))


def plateau_onset(
    times, values, slope_tol: float = 0.06, window: int = 4
) -> float:
    """First time after the global maximum where a series turns flat.

    Flat means the mean finite-difference slope over ``window`` consecutive
    intervals has magnitude at most ``slope_tol``; unlike
    ``detect_steady_start`` the flatness is local, so a shelf followed by a
    later drift still registers at the shelf's leading edge.

    Raises:
        FitWindowError: When no flat window follows the maximum.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.size < window + 2:
        msg = "series too short for plateau detection"
        raise FitWindowError(msg)
    peak = int(np.nanargmax(v))
    slopes = np.diff(v) / np.diff(t)
    for i in range(peak, slopes.size - window + 1):
        if abs(float(np.mean(slopes[i : i + window]))) <= slope_tol:
            return float(t[i])
    msg = (
        f"no window of {window} intervals after the peak has mean |slope|"
        f" <= {slope_tol:g}"
    )
    raise FitWindowError(msg)
