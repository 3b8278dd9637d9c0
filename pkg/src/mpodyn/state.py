"""Density matrices of qubit chains stored as matrix-product states.

A density matrix ``rho`` on ``N`` qubits is vectorized site by site: the
local operator basis ``|a><b|`` becomes a four-dimensional "doubled" site
index ``a * 2 + b``, and the resulting vector is factored into a chain of
rank-3 tensors with index order ``(left bond, physical, right bond)`` and
trivial boundary bonds.  In this representation the Hilbert-Schmidt norm
``||rho||_2`` is the ordinary MPS 2-norm, and the trace is the overlap
with the product vector ``vec(I) = (1, 0, 0, 1)`` on every site.

Site tensors are treated as immutable: every operation replaces list
entries with freshly allocated arrays and never writes into an existing
one, so shallow copies of a state may share tensors safely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTraceError, NumericError, ShapeError, SizeGuardError
from .tensor_ops import svd

#: Dimension of one doubled (operator-basis) site.
PHYS_DIM = 4

#: Largest chain a dense densification is allowed to materialize.
DENSE_SITE_LIMIT = 12

#: vec(identity/1) on one site in the a*2+b basis; contracting a physical leg
#: with this vector takes the local trace.
VEC_IDENTITY = np.array([1.0, 0.0, 0.0, 1.0])

#: On-disk container version for state snapshots.
SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Singular values across one bond, descending.

    ``bond`` is 1-based: bond ``k`` separates the first ``k`` sites from
    the rest of the chain.
    """

    bond: int
    values: np.ndarray

    def weights(self) -> np.ndarray:
        """Normalized squared values (Schmidt weights); they sum to one."""
        w = self.values.astype(np.float64) ** 2
        total = w.sum()
        if total == 0.0:
            msg = f"zero Schmidt spectrum at bond {self.bond}"
            raise DegenerateTraceError(msg)
        return w / total


@dataclass
class TruncationReport:
    """Bookkeeping for one truncation sweep.

    Attributes:
        bond_deltas: Realized relative discarded weight ``delta_k`` per bond
            (index ``k - 1`` holds bond ``k``).
        bond_ranks: Kept rank ``D_k`` per bond.
        pre_l2: 2-norm of the state before the sweep.
        post_l2: 2-norm after the sweep.
        trace_rescale: Factor ``1 / Re tr`` applied by renormalization,
            ``1.0`` when no renormalization took place.
    """

    bond_deltas: np.ndarray
    bond_ranks: np.ndarray
    pre_l2: float
    post_l2: float
    trace_rescale: float = 1.0

    @property
    def delta_sum(self) -> float:
        return float(self.bond_deltas.sum())

    @property
    def max_rank(self) -> int:
        return int(self.bond_ranks.max())


class DensityMPS:
    """A vectorized density matrix in matrix-product form.

    Attributes:
        tensors: Site tensors, each of shape ``(D_left, 4, D_right)`` with
            ``D_left = 1`` on the first site and ``D_right = 1`` on the last.
        center: Index of the orthogonality center, or None when no canonical
            form is maintained.  Sites left of the center are left
            isometries, sites right of it are right isometries.

    Methods that only move the orthogonality center mutate the gauge in
    place; the operator they represent is unchanged.
    """

    __slots__ = ("tensors", "center")

    def __init__(self, tensors, center: int | None = None, validate: bool = True):
        self.tensors = [np.asarray(t, dtype=np.complex128) for t in tensors]
        self.center = center
        if validate:
            self._check_shapes()

    def _check_shapes(self) -> None:
        n = len(self.tensors)
        if n < 2:
            msg = f"chain needs at least 2 sites, got {n}"
            raise ShapeError(msg)
        for i, t in enumerate(self.tensors):
            if t.ndim != 3 or t.shape[1] != PHYS_DIM:
                msg = f"site {i} tensor has shape {t.shape}, expected (D, {PHYS_DIM}, D')"
                raise ShapeError(msg)
        if self.tensors[0].shape[0] != 1 or self.tensors[-1].shape[2] != 1:
            msg = "boundary bonds must have dimension 1"
            raise ShapeError(msg)
        for i in range(n - 1):
            if self.tensors[i].shape[2] != self.tensors[i + 1].shape[0]:
                msg = (
                    f"bond mismatch between sites {i} and {i + 1}: "
                    f"{self.tensors[i].shape[2]} vs {self.tensors[i + 1].shape[0]}"
                )
                raise ShapeError(msg)
        if self.center is not None and not 0 <= self.center < n:
            msg = f"orthogonality center {self.center} out of range"
            raise ShapeError(msg)

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def computational_product(cls, bits) -> "DensityMPS":
        """Product state ``|b_1...b_N><b_1...b_N|`` for a bit string."""
        bits = list(bits)
        if len(bits) < 2:
            msg = "need at least 2 sites"
            raise ShapeError(msg)
        tensors = []
        for b in bits:
            if b not in (0, 1):
                msg = f"bits must be 0 or 1, got {b!r}"
                raise ShapeError(msg)
            t = np.zeros((1, PHYS_DIM, 1), dtype=np.complex128)
            t[0, b * 2 + b, 0] = 1.0
            tensors.append(t)
        return cls(tensors, center=0)

    @classmethod
    def from_dense_operator(cls, rho: np.ndarray, sites: int) -> "DensityMPS":
        """Exact MPS factorization of a dense ``(2**N, 2**N)`` operator."""
        if sites > DENSE_SITE_LIMIT:
            msg = f"dense conversion limited to {DENSE_SITE_LIMIT} sites, got {sites}"
            raise SizeGuardError(msg)
        dim = 2**sites
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (dim, dim):
            msg = f"expected shape {(dim, dim)}, got {rho.shape}"
            raise ShapeError(msg)
        # Interleave row and column qubit indices into doubled site indices.
        v = rho.reshape((2,) * (2 * sites))
        perm = [ax for i in range(sites) for ax in (i, sites + i)]
        v = v.transpose(perm).reshape((PHYS_DIM,) * sites)
        tensors = []
        left = 1
        rest = v.reshape(left * PHYS_DIM, -1)
        for i in range(sites - 1):
            res = svd(rest, where=f"densify bond {i + 1}")
            keep = res.singular_values > 0.0
            if not np.any(keep):
                keep[0] = True
            u = res.u[:, keep]
            sv = res.singular_values[keep]
            vh = res.vh[keep]
            tensors.append(u.reshape(left, PHYS_DIM, u.shape[1]))
            left = u.shape[1]
            rest = (sv[:, None] * vh).reshape(left * PHYS_DIM, -1)
        tensors.append(rest.reshape(left, PHYS_DIM, 1))
        return cls(tensors, center=sites - 1)

    def copy(self) -> "DensityMPS":
        """Shallow copy; site tensors are shared (they are never mutated)."""
        out = DensityMPS.__new__(DensityMPS)
        out.tensors = list(self.tensors)
        out.center = self.center
        return out

    # ------------------------------------------------------------------
    # basic queries

    @property
    def sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list[int]:
        """Interior bond dimensions ``[D_1, ..., D_{N-1}]``."""
        return [t.shape[2] for t in self.tensors[:-1]]

    def trace(self) -> complex:
        """Operator trace, computed as the overlap with vec(I) per site."""
        acc = np.ones((1, 1), dtype=np.complex128)
        for t in self.tensors:
            m = np.tensordot(VEC_IDENTITY, t, axes=(0, 1))
            acc = acc @ m
        return complex(acc[0, 0])

    def l2_norm(self) -> float:
        """Hilbert-Schmidt norm ``||rho||_2``."""
        if self.center is not None:
            return float(np.linalg.norm(self.tensors[self.center]))
        acc = np.ones((1, 1), dtype=np.complex128)
        for t in self.tensors:
            acc = np.einsum("ab,apc,bpd->cd", acc, t.conj(), t, optimize=True)
        val = acc[0, 0].real
        return float(np.sqrt(max(val, 0.0)))

    def inner(self, other: "DensityMPS") -> complex:
        """Hilbert-Schmidt inner product ``tr(self^dagger other)``."""
        if other.sites != self.sites:
            msg = f"site count mismatch: {self.sites} vs {other.sites}"
            raise ShapeError(msg)
        acc = np.ones((1, 1), dtype=np.complex128)
        for ta, tb in zip(self.tensors, other.tensors):
            acc = np.einsum("ab,apc,bpd->cd", acc, ta.conj(), tb, optimize=True)
        return complex(acc[0, 0])

    def l2_distance(self, other: "DensityMPS") -> float:
        """Hilbert-Schmidt distance ``||self - other||_2``."""
        val = (
            self.l2_norm() ** 2
            + other.l2_norm() ** 2
            - 2.0 * self.inner(other).real
        )
        return float(np.sqrt(max(val, 0.0)))

    # ------------------------------------------------------------------
    # gauge handling

    def _shift_center_right(self, i: int) -> None:
        """QR step moving the center from site ``i`` to ``i + 1``."""
        t = self.tensors[i]
        dl, _, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl * PHYS_DIM, dr))
        self.tensors[i] = q.reshape(dl, PHYS_DIM, q.shape[1])
        self.tensors[i + 1] = np.tensordot(r, self.tensors[i + 1], axes=(1, 0))
        self.center = i + 1

    def _shift_center_left(self, i: int) -> None:
        """QR step moving the center from site ``i`` to ``i - 1``."""
        t = self.tensors[i]
        dl, _, dr = t.shape
        q, r = np.linalg.qr(t.reshape(dl, PHYS_DIM * dr).conj().T)
        self.tensors[i] = q.conj().T.reshape(q.shape[1], PHYS_DIM, dr)
        self.tensors[i - 1] = np.tensordot(
            self.tensors[i - 1], r.conj().T, axes=(2, 0)
        )
        self.center = i - 1

    def move_center(self, target: int) -> None:
        """Bring the orthogonality center to ``target`` (gauge move only)."""
        if not 0 <= target < self.sites:
            msg = f"center {target} out of range for {self.sites} sites"
            raise ShapeError(msg)
        if self.center is None:
            self.center = self.sites - 1
            for i in range(self.sites - 1, 0, -1):
                self._shift_center_left(i)
        while self.center < target:
            self._shift_center_right(self.center)
        while self.center > target:
            self._shift_center_left(self.center)

    # ------------------------------------------------------------------
    # spectra and truncation

    def schmidt_spectrum(self, bond: int) -> SchmidtSpectrum:
        """Exact singular values across ``bond`` (1-based interior bond).

        Moves the orthogonality center as a side effect; the represented
        operator is unchanged.
        """
        if not 1 <= bond <= self.sites - 1:
            msg = f"bond {bond} out of range for {self.sites} sites"
            raise ShapeError(msg)
        self.move_center(bond - 1)
        t = self.tensors[bond - 1]
        dl, _, dr = t.shape
        res = svd(t.reshape(dl * PHYS_DIM, dr), where=f"bond {bond}")
        return SchmidtSpectrum(bond, res.singular_values)

    def truncate(self, delta_err: float) -> tuple["DensityMPS", TruncationReport]:
        """Sweep-truncate every bond to relative discarded weight <= delta_err.

        The sweep first right-canonicalizes, then moves left to right; at
        each bond the local SVD therefore sees the exact Schmidt spectrum of
        the partially truncated state, and the reported ``delta_k`` are
        exact by construction.

        Returns:
            ``(state, report)`` with a new state; ``self`` is unchanged.
        """
        if not 0.0 <= delta_err < 1.0:
            msg = f"delta_err must lie in [0, 1), got {delta_err}"
            raise NumericError(msg)
        out = self.copy()
        out.move_center(0)
        pre = out.l2_norm()
        n = out.sites
        deltas = np.zeros(n - 1)
        ranks = np.zeros(n - 1, dtype=np.int64)
        for k in range(n - 1):
            t = out.tensors[k]
            dl, _, dr = t.shape
            m = t.reshape(dl * PHYS_DIM, dr)
            if not np.any(m):
                msg = f"zero Schmidt spectrum at bond {k + 1}"
                raise DegenerateTraceError(msg)
            res = svd(m, weight_cutoff=delta_err, where=f"bond {k + 1}")
            deltas[k] = res.discarded_weight
            ranks[k] = res.rank
            out.tensors[k] = res.u.reshape(dl, PHYS_DIM, res.rank)
            carry = res.singular_values[:, None] * res.vh
            out.tensors[k + 1] = np.tensordot(carry, out.tensors[k + 1], axes=(1, 0))
            out.center = k + 1
        post = out.l2_norm()
        return out, TruncationReport(deltas, ranks, pre, post)

    def renormalize(self) -> tuple["DensityMPS", float]:
        """Divide by the trace so ``tr(rho) = 1``.

        Returns:
            ``(state, rescale)`` where ``rescale = 1 / Re tr`` is the factor
            that was applied.

        Raises:
            DegenerateTraceError: If the trace is zero within 1e-12 or has a
                relative imaginary part above 1e-10.
        """
        tr = self.trace()
        if abs(tr) <= 1e-12:
            msg = f"trace {tr} too small to renormalize"
            raise DegenerateTraceError(msg)
        if abs(tr.imag) > 1e-10 * abs(tr):
            msg = f"trace {tr} has a non-negligible imaginary part"
            raise DegenerateTraceError(msg)
        out = self.copy()
        site = out.center if out.center is not None else 0
        factor = 1.0 / tr.real
        out.tensors[site] = out.tensors[site] * factor
        return out, factor

    def truncate_and_renormalize(
        self, delta_err: float
    ) -> tuple["DensityMPS", TruncationReport]:
        """Truncation sweep followed by trace renormalization."""
        out, report = self.truncate(delta_err)
        out, factor = out.renormalize()
        report.trace_rescale = factor
        return out, report

    def operator_entanglement(self, cut: int) -> float:
        """Von Neumann entropy (base 2) of the Schmidt weights across ``cut``.

        Measures entanglement in the doubled (operator) space; bounded by
        ``2 * min(cut, N - cut)`` bits.
        """
        spec = self.schmidt_spectrum(cut)
        w = spec.weights()
        w = w[w > 0.0]
        return float(-(w * np.log2(w)).sum())

    # ------------------------------------------------------------------
    # densification and snapshots

    def to_dense_operator(self) -> np.ndarray:
        """Materialize the dense ``(2**N, 2**N)`` operator (N <= 12)."""
        n = self.sites
        if n > DENSE_SITE_LIMIT:
            msg = f"densification limited to {DENSE_SITE_LIMIT} sites, got {n}"
            raise SizeGuardError(msg)
        acc = self.tensors[0].reshape(PHYS_DIM, -1)
        for t in self.tensors[1:]:
            acc = acc.reshape(-1, t.shape[0]) @ t.reshape(t.shape[0], -1)
        v = acc.reshape((2,) * (2 * n))
        # Doubled axis order is (a_1, b_1, a_2, b_2, ...); rows collect the a's.
        perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        return v.transpose(perm).reshape(2**n, 2**n)

    def save(self, path) -> None:
        """Write a versioned snapshot (row-major complex tensors)."""
        payload = {
            "version": np.array(SNAPSHOT_VERSION),
            "sites": np.array(self.sites),
            "center": np.array(-1 if self.center is None else self.center),
        }
        for i, t in enumerate(self.tensors):
            payload[f"site_{i}"] = np.ascontiguousarray(t)
        with open(path, "wb") as fh:
            np.savez(fh, **payload)

    @classmethod
    def load(cls, path) -> "DensityMPS":
        """Read a snapshot written by :meth:`save`."""
        with np.load(path) as data:
            version = int(data["version"])
            if version != SNAPSHOT_VERSION:
                msg = f"unsupported snapshot version {version}"
                raise ShapeError(msg)
            n = int(data["sites"])
            center = int(data["center"])
            tensors = [data[f"site_{i}"] for i in range(n)]
        return cls(tensors, center=None if center < 0 else center)
