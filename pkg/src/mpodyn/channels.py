"""Single-site noise channels, random two-site gates, and brickwork circuits.

Channels act on the doubled (vectorized) representation: a Kraus map
``rho -> sum_mu K_mu rho K_mu^dagger`` lifts to the single-site matrix
``sum_mu K_mu (x) conj(K_mu)`` on a four-dimensional doubled index, and a
two-site unitary ``U`` lifts to ``U (x) conj(U)`` reshaped to doubled
indices.  Brickwork layers alternate: odd layers (t = 1, 3, ...) put gates
on site pairs (0,1), (2,3), ..., even layers on (1,2), (3,4), ...
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError
from .state import PHYS_DIM, DensityMPS
from .tensor_ops import svd

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

DEPOLARIZING = "depolarizing"
DAMPING = "amplitude-damping"
NOISE_KINDS = (DEPOLARIZING, DAMPING)


@dataclass(frozen=True)
class KrausChannel:
    """A single-qubit channel given by its Kraus operators.

    Attributes:
        ops: Tuple of 2x2 Kraus operators.
        kind: Tag such as "depolarizing", "amplitude-damping", "unitary".
        rate: Error probability the channel was built with, if any.
    """

    ops: tuple[np.ndarray, ...]
    kind: str = "custom"
    rate: float | None = None

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.ops)
        object.__setattr__(self, "ops", ops)
        if not ops:
            msg = "channel needs at least one Kraus operator"
            raise ShapeError(msg)
        for k in ops:
            if k.shape != (2, 2):
                msg = f"Kraus operators must be 2x2, got {k.shape}"
                raise ShapeError(msg)
        acc = sum(k.conj().T @ k for k in ops)
        if not np.allclose(acc, np.eye(2), atol=1e-12):
            msg = f"Kraus operators violate completeness: sum K^d K = {acc}"
            raise NumericError(msg)

    def doubled(self) -> np.ndarray:
        """4x4 action on one doubled site, ``sum_mu K_mu (x) conj(K_mu)``."""
        acc = np.zeros((PHYS_DIM, PHYS_DIM), dtype=np.complex128)
        for k in self.ops:
            acc += np.kron(k, k.conj())
        return acc


def depolarizing_channel(p: float) -> KrausChannel:
    """Depolarizing channel: identity with prob 1-p, a uniform Pauli with p.

    At ``p = 3/4`` the channel is a full twirl and maps every state to the
    maximally mixed one.
    """
    if not 0.0 <= p <= 1.0:
        msg = f"depolarizing probability must lie in [0, 1], got {p}"
        raise NumericError(msg)
    ops = (
        np.sqrt(1.0 - p) * PAULI_I,
        np.sqrt(p / 3.0) * PAULI_X,
        np.sqrt(p / 3.0) * PAULI_Y,
        np.sqrt(p / 3.0) * PAULI_Z,
    )
    return KrausChannel(ops, kind=DEPOLARIZING, rate=p)


def damping_channel(p: float) -> KrausChannel:
    """Amplitude damping: decay |1> -> |0> with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        msg = f"damping probability must lie in [0, 1], got {p}"
        raise NumericError(msg)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1), kind=DAMPING, rate=p)


def unitary_channel(u: np.ndarray) -> KrausChannel:
    """Wrap a single-qubit unitary as a one-operator channel."""
    return KrausChannel((np.asarray(u, dtype=np.complex128),), kind="unitary")


def noise_channel(kind: str, p: float) -> KrausChannel:
    """Factory dispatching on the noise kind tag."""
    if kind == DEPOLARIZING:
        return depolarizing_channel(p)
    if kind == DAMPING:
        return damping_channel(p)
    msg = f"unknown noise kind {kind!r}, expected one of {NOISE_KINDS}"
    raise NumericError(msg)


def haar_two_site(rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-random 4x4 unitary (QR of a complex Ginibre matrix)."""
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))[None, :]


def doubled_two_site(u: np.ndarray) -> np.ndarray:
    """Lift a two-qubit unitary to doubled indices, shape (4, 4, 4, 4).

    Index order is ``(p_i, p_{i+1}, q_i, q_{i+1})`` where each doubled index
    packs row and column qubit indices as ``a * 2 + b``.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (4, 4):
        msg = f"two-site gate must be 4x4, got {u.shape}"
        raise ShapeError(msg)
    residual = np.linalg.norm(u.conj().T @ u - np.eye(4))
    if residual > 1e-8:
        msg = f"gate is not unitary (residual {residual:.3e})"
        raise NumericError(msg)
    u4 = u.reshape(2, 2, 2, 2)  # (row_i, row_{i+1}, col_i, col_{i+1})
    g = np.einsum("aAcC,bBdD->abABcdCD", u4, u4.conj(), optimize=True)
    return g.reshape(PHYS_DIM, PHYS_DIM, PHYS_DIM, PHYS_DIM)


def apply_single_site_channel(
    state: DensityMPS, site: int, channel: KrausChannel
) -> DensityMPS:
    """Apply a channel to one site; bond dimensions are unchanged."""
    if not 0 <= site < state.sites:
        msg = f"site {site} out of range for {state.sites} sites"
        raise ShapeError(msg)
    out = state.copy()
    m = channel.doubled()
    out.tensors[site] = np.einsum(
        "pq,lqr->lpr", m, out.tensors[site], optimize=True
    )
    out.center = site if state.center == site else None
    return out


def apply_two_site_unitary(
    state: DensityMPS,
    left: int,
    u: np.ndarray,
    trunc: float | None = None,
) -> DensityMPS:
    """Apply a two-qubit unitary to sites (left, left+1) in doubled space.

    The two-site block is contracted with the lifted gate and split with a
    single SVD.  With ``trunc`` unset the split is exact (only bitwise-zero
    singular values are dropped); otherwise the new bond is compressed to
    relative discarded weight <= ``trunc`` against the local spectrum,
    which is approximate unless the surroundings are in canonical form.
    """
    if not 0 <= left < state.sites - 1:
        msg = f"gate at sites ({left}, {left + 1}) out of range"
        raise ShapeError(msg)
    g = doubled_two_site(u)
    out = state.copy()
    a, b = out.tensors[left], out.tensors[left + 1]
    dl, dr = a.shape[0], b.shape[2]
    theta = np.tensordot(a, b, axes=(2, 0))  # (dl, p, q, dr)
    theta = np.einsum("pqxy,lxyr->lpqr", g, theta, optimize=True)
    m = theta.reshape(dl * PHYS_DIM, PHYS_DIM * dr)
    cutoff = 0.0 if trunc is None else trunc
    res = svd(m, weight_cutoff=cutoff, where=f"gate ({left},{left + 1})")
    out.tensors[left] = res.u.reshape(dl, PHYS_DIM, res.rank)
    out.tensors[left + 1] = (res.singular_values[:, None] * res.vh).reshape(
        res.rank, PHYS_DIM, dr
    )
    out.center = left + 1 if state.center in (left, left + 1) else None
    return out


@dataclass(frozen=True)
class GateLayer:
    """One brickwork layer: a parity tag and (left site, unitary) pairs."""

    parity: str
    gates: tuple[tuple[int, np.ndarray], ...]


def layer_left_sites(sites: int, parity: str) -> list[int]:
    """Left sites covered by a brickwork layer of the given parity."""
    if parity == "odd":
        start = 0
    elif parity == "even":
        start = 1
    else:
        msg = f"parity must be 'odd' or 'even', got {parity!r}"
        raise NumericError(msg)
    return list(range(start, sites - 1, 2))


@dataclass(frozen=True)
class CircuitSpec:
    """Parameters of one noisy brickwork circuit run.

    Attributes:
        sites: Chain length N >= 2.
        depth: Number of layers T >= 0.
        noise: "depolarizing" or "amplitude-damping".
        rate: Error probability per site per layer.
        seed: Base seed; gates for realization r come from (seed, r).
        delta_err: Per-bond truncation threshold.
        truncate_at: None truncates after every step; a tuple restricts
            truncation to the listed steps (empty = never).
        initial: "zeros" or "ones" computational product start.
        gates_enabled: False runs the noise layers only.
    """

    sites: int
    depth: int
    noise: str
    rate: float
    seed: int = 0
    delta_err: float = 1e-6
    truncate_at: tuple[int, ...] | None = None
    initial: str = "zeros"
    gates_enabled: bool = True

    def __post_init__(self):
        if self.sites < 2:
            msg = f"need at least 2 sites, got {self.sites}"
            raise NumericError(msg)
        if self.depth < 0:
            msg = f"depth must be >= 0, got {self.depth}"
            raise NumericError(msg)
        if self.noise not in NOISE_KINDS:
            msg = f"unknown noise kind {self.noise!r}"
            raise NumericError(msg)
        if not 0.0 <= self.rate <= 1.0:
            msg = f"noise rate must lie in [0, 1], got {self.rate}"
            raise NumericError(msg)
        if not 0.0 <= self.delta_err < 1.0:
            msg = f"delta_err must lie in [0, 1), got {self.delta_err}"
            raise NumericError(msg)
        if self.initial not in ("zeros", "ones"):
            msg = f"initial must be 'zeros' or 'ones', got {self.initial!r}"
            raise NumericError(msg)
        if self.truncate_at is not None:
            object.__setattr__(self, "truncate_at", tuple(int(t) for t in self.truncate_at))

    def initial_state(self) -> DensityMPS:
        bit = 0 if self.initial == "zeros" else 1
        return DensityMPS.computational_product([bit] * self.sites)

    def channel(self) -> KrausChannel:
        return noise_channel(self.noise, self.rate)

    def truncates_at(self, step: int) -> bool:
        return self.truncate_at is None or step in self.truncate_at


def realization_rng(seed: int, realization: int) -> np.random.Generator:
    """Deterministic per-realization generator (counter-based Philox)."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((seed, realization)))
    )


def circuit_layers(spec: CircuitSpec, realization: int) -> list[GateLayer]:
    """Draw the full gate sequence for one realization, layer by layer.

    Layers are returned for t = 1..depth; gates within a layer are drawn
    left to right, so the sequence is reproducible bit for bit.
    """
    rng = realization_rng(spec.seed, realization)
    layers = []
    for t in range(1, spec.depth + 1):
        parity = "odd" if t % 2 == 1 else "even"
        if spec.gates_enabled:
            gates = tuple(
                (left, haar_two_site(rng))
                for left in layer_left_sites(spec.sites, parity)
            )
        else:
            gates = ()
        layers.append(GateLayer(parity, gates))
    return layers


def noisy_circuit_step(
    state: DensityMPS, layer: GateLayer, channel: KrausChannel
) -> DensityMPS:
    """One circuit step: the layer's gates, then noise on every site.

    No truncation happens here; gate splits are exact.
    """
    out = state
    for left, u in layer.gates:
        out = apply_two_site_unitary(out, left, u)
    for site in range(out.sites):
        out = apply_single_site_channel(out, site, channel)
    return out
