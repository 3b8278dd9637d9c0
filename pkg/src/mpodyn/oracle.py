"""Dense references and closed-form solutions used to cross-check the MPS path.

Dense density matrices are plain ``(2**N, 2**N)`` complex arrays.  The
evolution routines here replay exactly the same gate sequences and Trotter
schedules as the MPS code (both sides share the layer and step builders), so
any difference between the two routes isolates the truncation step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    DAMPING,
    DEPOLARIZING,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    CircuitSpec,
    GateLayer,
    KrausChannel,
    circuit_layers,
)
from .errors import NumericError, SizeGuardError
from .lindblad import LindbladSpec, TrotterStep, ising_two_site_terms, trotter_step

#: Largest chain for dense circuit references.
CIRCUIT_SITE_LIMIT = 12
#: Largest chain for dense Lindblad references.
LINDBLAD_SITE_LIMIT = 10


# ----------------------------------------------------------------------
# dense states and primitive applications


def dense_computational(bits) -> np.ndarray:
    """Dense ``|b><b|`` for a computational basis bit string."""
    bits = list(bits)
    n = len(bits)
    index = 0
    for b in bits:
        index = index * 2 + int(b)
    rho = np.zeros((2**n, 2**n), dtype=np.complex128)
    rho[index, index] = 1.0
    return rho


def dense_maximally_mixed(sites: int) -> np.ndarray:
    return np.eye(2**sites, dtype=np.complex128) / 2**sites


def l2_norm_dense(a: np.ndarray) -> float:
    """Hilbert-Schmidt norm (Frobenius norm) of a dense operator."""
    return float(np.linalg.norm(a))


def l1_norm(a: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix (sum of absolute eigenvalues).

    Raises:
        NumericError: If the input is not Hermitian within 1e-8 relative to
            ``max(1, ||a||_2)``.
    """
    a = np.asarray(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    residual = float(np.linalg.norm(a - a.conj().T))
    if residual > 1e-8 * scale:
        msg = f"matrix is not Hermitian (residual {residual:.3e})"
        raise NumericError(msg)
    w = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
    return float(np.abs(w).sum())


def _apply_row_op(out: np.ndarray, op: np.ndarray, site: int, width: int) -> np.ndarray:
    """Multiply ``op`` onto the row indices of ``width`` qubits at ``site``."""
    shaped = out.reshape(2**site, 2**width, -1)
    return np.matmul(op, shaped).reshape(out.shape)


def _apply_col_op(out: np.ndarray, op: np.ndarray, site: int, width: int, n: int) -> np.ndarray:
    """Multiply ``op^dagger`` onto the column indices (i.e. ``rho -> rho op^d``)."""
    shaped = out.reshape(2**n * 2**site, 2**width, -1)
    return np.matmul(op.conj(), shaped).reshape(out.shape)


def apply_two_site_unitary_dense(
    rho: np.ndarray, left: int, u: np.ndarray, sites: int
) -> np.ndarray:
    """``U rho U^dagger`` for a 4x4 unitary on adjacent sites (left, left+1)."""
    out = _apply_row_op(rho, u, left, 2)
    return _apply_col_op(out, u, left, 2, sites)


def apply_channel_dense(
    rho: np.ndarray, site: int, channel: KrausChannel, sites: int
) -> np.ndarray:
    """Generic Kraus application ``sum_mu K rho K^dagger`` on one site."""
    acc = np.zeros_like(rho)
    for k in channel.ops:
        term = _apply_row_op(rho, k, site, 1)
        acc += _apply_col_op(term, k, site, 1, sites)
    return acc


def _depolarize_site_inplace(rho: np.ndarray, site: int, p: float, n: int) -> None:
    """Fast in-place depolarizing update: mix with identity x partial trace."""
    rest = 2 ** (n - site - 1)
    view = rho.reshape(2**site, 2, rest, 2**site, 2, rest)
    tr = view[:, 0, :, :, 0, :] + view[:, 1, :, :, 1, :]
    rho *= 1.0 - 4.0 * p / 3.0
    view[:, 0, :, :, 0, :] += (2.0 * p / 3.0) * tr
    view[:, 1, :, :, 1, :] += (2.0 * p / 3.0) * tr


def _damp_site_inplace(rho: np.ndarray, site: int, p: float, n: int) -> None:
    """Fast in-place amplitude-damping update on one site."""
    rest = 2 ** (n - site - 1)
    view = rho.reshape(2**site, 2, rest, 2**site, 2, rest)
    view[:, 0, :, :, 0, :] += p * view[:, 1, :, :, 1, :]
    amp = np.sqrt(1.0 - p)
    view[:, 0, :, :, 1, :] *= amp
    view[:, 1, :, :, 0, :] *= amp
    view[:, 1, :, :, 1, :] *= 1.0 - p


def apply_noise_layer_dense(rho: np.ndarray, channel: KrausChannel, sites: int) -> np.ndarray:
    """Apply a single-site channel to every site (returns a new array)."""
    out = rho.copy()
    if channel.kind == DEPOLARIZING and channel.rate is not None:
        for site in range(sites):
            _depolarize_site_inplace(out, site, channel.rate, sites)
    elif channel.kind == DAMPING and channel.rate is not None:
        for site in range(sites):
            _damp_site_inplace(out, site, channel.rate, sites)
    else:
        for site in range(sites):
            out = apply_channel_dense(out, site, channel, sites)
    return out


# ----------------------------------------------------------------------
# dense evolution mirroring the MPS schedules


def circuit_step_dense(
    rho: np.ndarray, layer: GateLayer, channel: KrausChannel, sites: int
) -> np.ndarray:
    """One circuit step: the layer's gates, then noise on every site."""
    out = rho
    for left, u in layer.gates:
        out = apply_two_site_unitary_dense(out, left, u, sites)
    return apply_noise_layer_dense(out, channel, sites)


def evolve_circuit_dense(spec: CircuitSpec, realization: int, observer) -> np.ndarray:
    """Exact dense run of one circuit realization.

    ``observer(t, rho)`` is called after every step with the working array
    (read-only by convention).

    Raises:
        SizeGuardError: Beyond the dense circuit limit.
    """
    if spec.sites > CIRCUIT_SITE_LIMIT:
        msg = f"dense circuit reference limited to {CIRCUIT_SITE_LIMIT} sites"
        raise SizeGuardError(msg)
    rho = dense_computational([0 if spec.initial == "zeros" else 1] * spec.sites)
    channel = spec.channel()
    for t, layer in enumerate(circuit_layers(spec, realization), start=1):
        rho = circuit_step_dense(rho, layer, channel, spec.sites)
        if observer is not None:
            observer(t, rho)
    return rho


def lindblad_step_dense(rho: np.ndarray, step: TrotterStep) -> np.ndarray:
    """One Trotter step on a dense state, same primitive order as the MPS."""
    out = rho
    for prim in step.primitives():
        if prim[0] == "dissipation":
            out = apply_noise_layer_dense(out, prim[1], step.sites)
        else:
            out = apply_two_site_unitary_dense(out, prim[1], prim[2], step.sites)
    return out


def evolve_lindblad_dense(spec: LindbladSpec, observer) -> np.ndarray:
    """Dense run of the Trotterized Lindblad schedule (no truncation).

    ``observer(t, rho)`` is called after every step.

    Raises:
        SizeGuardError: Beyond the dense Lindblad limit.
    """
    if spec.sites > LINDBLAD_SITE_LIMIT:
        msg = f"dense Lindblad reference limited to {LINDBLAD_SITE_LIMIT} sites"
        raise SizeGuardError(msg)
    rho = dense_computational([0] * spec.sites)
    step = trotter_step(spec)
    for idx in range(1, spec.n_steps + 1):
        rho = lindblad_step_dense(rho, step)
        if observer is not None:
            observer(idx * spec.dt, rho)
    return rho


#: Largest chain for the explicit generator matrix (dimension 4**N).
GENERATOR_SITE_LIMIT = 5


def _embed_site_superop(op_l: np.ndarray, op_r: np.ndarray, site: int, sites: int) -> np.ndarray:
    """Matrix of ``rho -> embed(op_l) rho embed(op_r)^T`` on one site.

    On row-major ``rho.reshape(-1)`` that superoperator is
    ``kron(embed(op_l), embed(op_r))`` with single-site operators embedded
    by identity ``kron`` chains.
    """
    left = np.eye(2**site)
    right = np.eye(2 ** (sites - site - 1))
    row = np.kron(np.kron(left, op_l), right)
    col = np.kron(np.kron(left, op_r), right)
    return np.kron(row, col)


def lindblad_generator_dense(spec: LindbladSpec) -> np.ndarray:
    """Continuous-time generator matrix acting on row-vectorized states.

    The Hamiltonian part sums the same two-site terms the Trotter schedule
    splits.  The dissipator is the generator whose exact exponential the
    per-step noise factor with rate ``1 - exp(-kappa dt)`` reproduces: the
    match is exact for amplitude damping and holds to first order in
    ``kappa * dt`` for depolarizing (whose exponential is the depolarizing
    channel at rate ``(3/4)(1 - exp(-4 kappa t / 3))``).

    Raises:
        SizeGuardError: Beyond the explicit-generator limit.
    """
    n = spec.sites
    if n > GENERATOR_SITE_LIMIT:
        msg = f"explicit generator limited to {GENERATOR_SITE_LIMIT} sites"
        raise SizeGuardError(msg)
    dim = 2**n
    ham = np.zeros((dim, dim), dtype=np.complex128)
    for i, term in enumerate(ising_two_site_terms(spec.ising, n)):
        left = np.eye(2**i)
        right = np.eye(2 ** (n - i - 2))
        ham += np.kron(np.kron(left, term), right)
    eye = np.eye(dim)
    gen = -1j * (np.kron(ham, eye) - np.kron(eye, ham.T))
    kappa = spec.kappa
    if kappa > 0.0:
        if spec.noise == DEPOLARIZING:
            jumps = [
                np.sqrt(kappa / 3.0) * s for s in (PAULI_X, PAULI_Y, PAULI_Z)
            ]
        else:
            lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
            jumps = [np.sqrt(kappa) * lower]
        for site in range(n):
            for op in jumps:
                gram = op.conj().T @ op
                gen += _embed_site_superop(op, op.conj(), site, n)
                gen -= 0.5 * _embed_site_superop(gram, PAULI_I, site, n)
                gen -= 0.5 * _embed_site_superop(PAULI_I, gram.T, site, n)
    return gen


def evolve_lindblad_exact(spec: LindbladSpec) -> np.ndarray:
    """End-time dense state via the matrix exponential of the generator.

    Uses the same ``|0...0><0...0|`` initial state as the Trotterized dense
    run, so the difference between the two isolates the splitting error.
    """
    from scipy.linalg import expm

    gen = lindblad_generator_dense(spec)
    rho0 = dense_computational([0] * spec.sites)
    vec = expm(spec.total_time * gen) @ rho0.reshape(-1)
    return vec.reshape(rho0.shape)


# ----------------------------------------------------------------------
# closed forms: gate-free noise


def pure_depolarizing_log2_l2(p: float, t: int) -> float:
    """Per-qubit ``(1/N) log2 ||rho_t||_2`` for depolarizing noise alone.

    Starting from any computational product state; independent of N.
    """
    if not 0.0 <= p <= 1.0:
        msg = f"probability must lie in [0, 1], got {p}"
        raise NumericError(msg)
    if t < 0 or t != int(t):
        msg = f"step count must be a non-negative integer, got {t}"
        raise NumericError(msg)
    q = 1.0 - 4.0 * p / 3.0
    return 0.5 * np.log2((1.0 + (q * q) ** int(t)) / 2.0)


def pure_damping_log2_l2(p: float, t: int) -> float:
    """Per-qubit ``(1/N) log2 ||rho_t||_2`` for amplitude damping alone.

    Starting from the all-ones product state; independent of N.
    """
    if not 0.0 <= p <= 1.0:
        msg = f"probability must lie in [0, 1], got {p}"
        raise NumericError(msg)
    if t < 0 or t != int(t):
        msg = f"step count must be a non-negative integer, got {t}"
        raise NumericError(msg)
    s = (1.0 - p) ** int(t)
    return 0.5 * np.log2((1.0 - s) ** 2 + s * s)


# ----------------------------------------------------------------------
# single qubit: resonant drive with amplitude damping


@dataclass(frozen=True)
class QubitState:
    """One qubit's density matrix entries (rows/cols ordered |0>, |1>)."""

    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    def purity(self) -> float:
        return float(
            (self.rho00 * self.rho00 + self.rho11 * self.rho11).real
            + 2.0 * (self.rho01 * self.rho10).real
        )

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho00, self.rho01], [self.rho10, self.rho11]],
            dtype=np.complex128,
        )


def rabi_damping_closed_form(omega: float, kappa: float, t: float) -> QubitState:
    """Driven damped qubit from |0>: exact state at time ``t``.

    The drive is ``H = (omega/2) X`` and the dissipator damps |1> -> |0> at
    rate ``kappa``.  Both damping branches (underdamped eta < 4 and
    overdamped eta > 4, with ``eta = kappa / omega``) and the critical point
    are covered by one complex-frequency expression.
    """
    if omega <= 0.0:
        msg = f"omega must be > 0, got {omega}"
        raise NumericError(msg)
    if kappa < 0.0:
        msg = f"kappa must be >= 0, got {kappa}"
        raise NumericError(msg)
    if t < 0.0:
        msg = f"time must be >= 0, got {t}"
        raise NumericError(msg)
    eta = kappa / omega
    c = 1.0 / (2.0 + eta * eta)
    decay = np.exp(-0.75 * kappa * t)
    freq = omega * np.sqrt(complex(1.0 - eta * eta / 16.0))
    x = freq * t
    cosine = np.cos(x).real
    if abs(x) < 1e-6:
        # sin(x)/x by series; covers the critically damped point freq = 0.
        sinc = (1.0 - x * x / 6.0).real * t
    else:
        sinc = (np.sin(x) / freq).real
    rho11 = c * (1.0 - decay * (cosine + 0.75 * kappa * sinc))
    rho10 = -1j * c * (
        eta - decay * (eta * cosine - (1.0 - eta * eta / 4.0) * omega * sinc)
    )
    rho00 = 1.0 - rho11
    return QubitState(rho00, np.conj(rho10), rho10, rho11)


def rabi_damping_steady_purity(eta: float) -> float:
    """Purity of the driven damped qubit's steady state, as a function of
    ``eta = kappa / omega``."""
    if eta < 0.0:
        msg = f"eta must be >= 0, got {eta}"
        raise NumericError(msg)
    e2 = eta * eta
    return 0.5 * (1.0 + e2 * (4.0 + e2) / (2.0 + e2) ** 2)


def rabi_damping_ode(
    omega: float,
    kappa: float,
    total_time: float,
    dt: float | None = None,
    initial: str = "ground",
    sample_stride: int = 100,
) -> list[tuple[float, QubitState]]:
    """Fixed-step fourth-order integration of the driven damped qubit.

    Args:
        omega: Drive amplitude (>= 0; 0 disables the drive).
        kappa: Damping rate (>= 0).
        total_time: Integration time.
        dt: Step size; defaults to ``1e-3 / max(omega, kappa)`` and must not
            exceed that bound when given.
        initial: "ground" (|0>) or "excited" (|1>).
        sample_stride: Keep every this-many-th step in the returned
            trajectory (the initial and final states are always kept).

    Returns:
        List of ``(t, QubitState)`` samples.
    """
    if omega < 0.0 or kappa < 0.0:
        msg = f"omega and kappa must be >= 0, got {omega}, {kappa}"
        raise NumericError(msg)
    if total_time < 0.0:
        msg = f"total_time must be >= 0, got {total_time}"
        raise NumericError(msg)
    scale = max(omega, kappa)
    if scale > 0.0:
        bound = 1e-3 / scale
        if dt is None:
            dt = bound
        elif dt > bound * (1.0 + 1e-12):
            msg = f"dt {dt} exceeds the accuracy bound {bound}"
            raise NumericError(msg)
    elif dt is None:
        dt = total_time if total_time > 0.0 else 1.0
    if initial == "ground":
        rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    elif initial == "excited":
        rho = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    else:
        msg = f"initial must be 'ground' or 'excited', got {initial!r}"
        raise NumericError(msg)

    ham = 0.5 * omega * np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
    number = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128)

    def rhs(r):
        comm = ham @ r - r @ ham
        jump = lower @ r @ lower.conj().T
        anti = number @ r + r @ number
        return -1j * comm + kappa * (jump - 0.5 * anti)

    n_steps = max(1, int(round(total_time / dt))) if total_time > 0.0 else 0
    h = total_time / n_steps if n_steps else 0.0
    samples = [(0.0, _qubit_from_matrix(rho))]
    for i in range(1, n_steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if i % sample_stride == 0 or i == n_steps:
            samples.append((i * h, _qubit_from_matrix(rho)))
    return samples


def _qubit_from_matrix(rho: np.ndarray) -> QubitState:
    return QubitState(rho[0, 0], rho[0, 1], rho[1, 0], rho[1, 1])
