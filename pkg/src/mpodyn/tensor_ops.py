"""Dense complex tensor primitives: pairwise contraction and truncating SVD.

Tensors are plain numpy ``complex128`` arrays.  Whenever a tensor is
serialized or reshaped the linearization is row-major (C order), so the
flat data layout is portable across machines and sessions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericError, ShapeError, SvdBackendError

#: Relative spread below which trailing singular values count as tied to the
#: last kept one and are retained to keep ranks backend-independent.
SVD_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD factors plus the relative weight of the discarded tail.

    Attributes:
        u: Left factor with orthonormal columns, shape ``(m, r)``.
        singular_values: Kept singular values, descending, shape ``(r,)``.
        vh: Right factor with orthonormal rows, shape ``(r, n)``.
        discarded_weight: ``sum(s_dropped**2) / sum(s_all**2)``; zero when
            nothing was dropped.
    """

    u: np.ndarray
    singular_values: np.ndarray
    vh: np.ndarray
    discarded_weight: float

    @property
    def rank(self) -> int:
        return self.singular_values.size


def contract(a: np.ndarray, b: np.ndarray, paired_axes) -> np.ndarray:
    """Contract two tensors over the given axis pairs.

    Args:
        a: First tensor.
        b: Second tensor.
        paired_axes: Sequence of ``(axis_of_a, axis_of_b)`` pairs.  Paired
            axes must have equal lengths.

    Returns:
        Tensor carrying the unpaired axes of ``a`` followed by the unpaired
        axes of ``b``, in their original order.  Contracting all axes yields
        a zero-dimensional array.

    Raises:
        ShapeError: If an axis index is out of range, an axis is paired
            twice, or paired dimensions disagree.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    pairs = [(int(i), int(j)) for i, j in paired_axes]
    axes_a = [i for i, _ in pairs]
    axes_b = [j for _, j in pairs]
    for name, axes, t in (("first", axes_a, a), ("second", axes_b, b)):
        for ax in axes:
            if not 0 <= ax < t.ndim:
                msg = f"axis {ax} out of range for {name} tensor of rank {t.ndim}"
                raise ShapeError(msg)
        if len(set(axes)) != len(axes):
            msg = f"repeated axis in contraction spec for {name} tensor"
            raise ShapeError(msg)
    for i, j in pairs:
        if a.shape[i] != b.shape[j]:
            msg = (
                f"cannot contract axis {i} of shape {a.shape} with "
                f"axis {j} of shape {b.shape}: {a.shape[i]} != {b.shape[j]}"
            )
            raise ShapeError(msg)
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def _raw_svd(m: np.ndarray, where: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD with a divide-and-conquer first try and a QR-based fallback."""
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
    except Exception as exc:  # pragma: no cover - needs a LAPACK failure
        msg = f"SVD failed to converge{f' at {where}' if where else ''}"
        raise SvdBackendError(msg) from exc


def svd(
    m: np.ndarray,
    max_rank: int | None = None,
    weight_cutoff: float | None = None,
    where: str = "",
) -> SvdResult:
    """Singular value decomposition with deterministic rank truncation.

    The kept rank is the smallest leading rank whose discarded relative
    squared weight does not exceed ``weight_cutoff``; if ``max_rank`` is
    given the rank is additionally capped.  When the cutoff sets the rank,
    trailing values equal to the last kept one within ``SVD_TIE_RTOL``
    (relative) are also kept, so the result does not depend on how the
    backend orders a degenerate cluster.

    Args:
        m: Matrix to factor (two-dimensional, at least one row and column).
        max_rank: Optional hard cap on the kept rank (``>= 1``).
        weight_cutoff: Optional bound in ``[0, 1)`` on the discarded
            relative squared weight.  ``0`` keeps every nonzero value but
            drops exact zeros.
        where: Optional context string included in backend error messages.

    Returns:
        An :class:`SvdResult`; ``u @ diag(s) @ vh`` reconstructs ``m`` up to
        the discarded weight.

    Raises:
        ShapeError: If ``m`` is not a matrix with positive dimensions.
        NumericError: If ``m`` has non-finite entries or a parameter is out
            of its domain.
        SvdBackendError: If both LAPACK drivers fail to converge.
    """
    m = np.asarray(m)
    if m.ndim != 2:
        msg = f"svd expects a matrix, got rank-{m.ndim} tensor"
        raise ShapeError(msg)
    if m.shape[0] < 1 or m.shape[1] < 1:
        msg = f"svd expects positive dimensions, got shape {m.shape}"
        raise ShapeError(msg)
    if not np.all(np.isfinite(m)):
        msg = f"non-finite entries in svd input{f' at {where}' if where else ''}"
        raise NumericError(msg)
    if max_rank is not None and max_rank < 1:
        msg = f"max_rank must be >= 1, got {max_rank}"
        raise NumericError(msg)
    if weight_cutoff is not None and not 0.0 <= weight_cutoff < 1.0:
        msg = f"weight_cutoff must lie in [0, 1), got {weight_cutoff}"
        raise NumericError(msg)

    u, s, vh = _raw_svd(m, where)
    n = s.size
    weights = s.astype(np.float64) ** 2
    total = float(weights.sum())

    if total == 0.0:
        # Zero matrix: keep a single zero value so downstream shapes stay valid.
        rank = 1 if (weight_cutoff is not None or max_rank is not None) else n
        rank = min(rank, n)
        return SvdResult(u[:, :rank], s[:rank], vh[:rank], 0.0)

    if weight_cutoff is not None:
        # tail[r] = relative weight lost when keeping the leading r values.
        tail = np.concatenate([weights[::-1].cumsum()[::-1], [0.0]]) / total
        rank = n
        for r in range(1, n + 1):
            if tail[r] <= weight_cutoff:
                rank = r
                break
        cutoff_bound = rank
        if max_rank is not None:
            rank = min(rank, max_rank)
        if rank == cutoff_bound:
            # Extend across a degenerate cluster at the truncation boundary,
            # never past an explicit rank cap.
            edge = s[rank - 1]
            while (
                rank < n
                and (max_rank is None or rank < max_rank)
                and s[rank] >= edge * (1.0 - SVD_TIE_RTOL)
            ):
                rank += 1
    elif max_rank is not None:
        rank = min(max_rank, n)
    else:
        rank = n

    discarded = float(weights[rank:].sum() / total)
    return SvdResult(u[:, :rank], s[:rank], vh[:rank], discarded)


def singular_values(m: np.ndarray, where: str = "") -> np.ndarray:
    """Full singular value spectrum of a matrix, descending."""
    res = svd(m, where=where)
    return res.singular_values
