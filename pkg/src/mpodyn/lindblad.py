"""Trotterized Lindblad dynamics of a noisy Ising chain.

The Hamiltonian is ``H = -J sum Z_i Z_{i+1} - g sum X_i - h sum Z_i``; the
dissipator applies an independent single-qubit channel (depolarizing or
amplitude damping) at rate ``kappa`` on every site.  One time step of size
``dt`` is a symmetrized splitting: half-step dissipation on all sites, a
half-step layer of bond unitaries on bonds (1,2), (3,4), ..., a full-step
layer on bonds (2,3), (4,5), ..., the half-step bond layer again, and the
closing half-step dissipation.  Dissipation over time ``t`` uses the error
probability ``p = 1 - exp(-kappa t)``, which reproduces the generator to
first order in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    PAULI_I,
    PAULI_X,
    PAULI_Z,
    KrausChannel,
    NOISE_KINDS,
    apply_single_site_channel,
    apply_two_site_unitary,
    noise_channel,
)
from .errors import NumericError
from .state import DensityMPS, TruncationReport


def rate_from_kappa(kappa: float, dt: float) -> float:
    """Error probability accumulated over time ``dt`` at rate ``kappa``."""
    if kappa < 0.0:
        msg = f"kappa must be >= 0, got {kappa}"
        raise NumericError(msg)
    if dt < 0.0:
        msg = f"dt must be >= 0, got {dt}"
        raise NumericError(msg)
    return float(-np.expm1(-kappa * dt))


@dataclass(frozen=True)
class IsingParams:
    """Couplings of the Ising chain: ZZ coupling J, fields g (X) and h (Z)."""

    coupling: float = 1.0
    transverse: float = 1.0
    longitudinal: float = 1.0

    def __post_init__(self):
        if self.coupling == 0.0:
            msg = "coupling J must be nonzero"
            raise NumericError(msg)


def ising_two_site_terms(params: IsingParams, sites: int) -> list[np.ndarray]:
    """Two-site Hamiltonian terms whose sum is the full chain Hamiltonian.

    Bond ``i`` (between sites i and i+1, 0-based) carries the ZZ coupling
    plus the single-site fields with weight 1/2, except that boundary sites
    put their full field on the single bond touching them.  For ``sites = 2``
    the one bond carries both fields in full.
    """
    if sites < 2:
        msg = f"need at least 2 sites, got {sites}"
        raise NumericError(msg)
    j = params.coupling
    g = params.transverse
    h = params.longitudinal
    zz = np.kron(PAULI_Z, PAULI_Z)
    terms = []
    for i in range(sites - 1):
        wl = 1.0 if i == 0 else 0.5
        wr = 1.0 if i + 1 == sites - 1 else 0.5
        term = (
            -j * zz
            - g * (wl * np.kron(PAULI_X, PAULI_I) + wr * np.kron(PAULI_I, PAULI_X))
            - h * (wl * np.kron(PAULI_Z, PAULI_I) + wr * np.kron(PAULI_I, PAULI_Z))
        )
        terms.append(term)
    return terms


def bond_unitary(h_term: np.ndarray, tau: float) -> np.ndarray:
    """``exp(-i tau H)`` for a Hermitian 4x4 term, via eigendecomposition."""
    h_term = np.asarray(h_term, dtype=np.complex128)
    if np.linalg.norm(h_term - h_term.conj().T) > 1e-10:
        msg = "bond term is not Hermitian"
        raise NumericError(msg)
    w, v = np.linalg.eigh(h_term)
    return (v * np.exp(-1j * tau * w)[None, :]) @ v.conj().T


@dataclass(frozen=True)
class LindbladSpec:
    """Parameters of one Trotterized Lindblad run.

    Attributes:
        sites: Chain length N >= 2.
        ising: Hamiltonian couplings.
        noise: "depolarizing" or "amplitude-damping".
        kappa: Dissipation rate per site.
        dt: Trotter step size.
        total_time: Evolution time; must be an integer number of steps.
        delta_err: Per-bond truncation threshold.
        truncate_at: None truncates after every step; a tuple of step
            indices restricts truncation to those steps (empty = never).
    """

    sites: int
    total_time: float
    ising: IsingParams = IsingParams()
    noise: str = "depolarizing"
    kappa: float = 0.0
    dt: float = 0.05
    delta_err: float = 1e-6
    truncate_at: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.sites < 2:
            msg = f"need at least 2 sites, got {self.sites}"
            raise NumericError(msg)
        if self.dt <= 0.0:
            msg = f"dt must be > 0, got {self.dt}"
            raise NumericError(msg)
        if self.total_time < 0.0:
            msg = f"total_time must be >= 0, got {self.total_time}"
            raise NumericError(msg)
        if self.noise not in NOISE_KINDS:
            msg = f"unknown noise kind {self.noise!r}"
            raise NumericError(msg)
        if self.kappa < 0.0:
            msg = f"kappa must be >= 0, got {self.kappa}"
            raise NumericError(msg)
        if not 0.0 <= self.delta_err < 1.0:
            msg = f"delta_err must lie in [0, 1), got {self.delta_err}"
            raise NumericError(msg)
        steps = self.total_time / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            msg = f"total_time {self.total_time} is not a multiple of dt {self.dt}"
            raise NumericError(msg)
        if self.truncate_at is not None:
            object.__setattr__(
                self, "truncate_at", tuple(int(t) for t in self.truncate_at)
            )

    @property
    def n_steps(self) -> int:
        return int(round(self.total_time / self.dt))

    def truncates_at(self, step: int) -> bool:
        return self.truncate_at is None or step in self.truncate_at

    def initial_state(self) -> DensityMPS:
        return DensityMPS.computational_product([0] * self.sites)


@dataclass(frozen=True)
class TrotterStep:
    """Precomputed primitives of one symmetrized time step.

    ``half_gates`` act on bonds (1,2), (3,4), ... (1-based labels) and are
    applied twice per step with ``tau = dt/2``; ``full_gates`` act on the
    complementary bonds once with ``tau = dt``.  ``dissipation`` is the
    half-step channel applied on every site at the start and end.
    """

    dissipation: KrausChannel
    half_gates: tuple[tuple[int, np.ndarray], ...]
    full_gates: tuple[tuple[int, np.ndarray], ...]
    sites: int

    def primitives(self):
        """Yield ("dissipation", channel) / ("gate", left, u) in order."""
        yield ("dissipation", self.dissipation)
        for left, u in self.half_gates:
            yield ("gate", left, u)
        for left, u in self.full_gates:
            yield ("gate", left, u)
        for left, u in self.half_gates:
            yield ("gate", left, u)
        yield ("dissipation", self.dissipation)


def trotter_step(spec: LindbladSpec) -> TrotterStep:
    """Build the primitives of one time step of the given run."""
    terms = ising_two_site_terms(spec.ising, spec.sites)
    half = tuple(
        (i, bond_unitary(terms[i], spec.dt / 2.0))
        for i in range(0, spec.sites - 1, 2)
    )
    full = tuple(
        (i, bond_unitary(terms[i], spec.dt)) for i in range(1, spec.sites - 1, 2)
    )
    channel = noise_channel(spec.noise, rate_from_kappa(spec.kappa, spec.dt / 2.0))
    return TrotterStep(channel, half, full, spec.sites)


def apply_trotter_step(state: DensityMPS, step: TrotterStep) -> DensityMPS:
    """Apply one full time step to an MPS state (no truncation)."""
    out = state
    for prim in step.primitives():
        if prim[0] == "dissipation":
            for site in range(out.sites):
                out = apply_single_site_channel(out, site, prim[1])
        else:
            out = apply_two_site_unitary(out, prim[1], prim[2])
    return out


def evolve_lindblad(
    state: DensityMPS, spec: LindbladSpec, observer=None
) -> DensityMPS:
    """Run the Trotterized Lindblad evolution with per-step truncation.

    After each step the state is truncated to ``delta_err`` and
    renormalized (where the schedule says so).  ``observer``, if given, is
    called as ``observer(t, state, report)`` with the post-step state;
    ``report`` is None on steps without truncation.
    """
    step = trotter_step(spec)
    out = state
    for idx in range(1, spec.n_steps + 1):
        out = apply_trotter_step(out, step)
        report: TruncationReport | None = None
        if spec.truncates_at(idx):
            out, report = out.truncate_and_renormalize(spec.delta_err)
        if observer is not None:
            observer(idx * spec.dt, out, report)
    return out
