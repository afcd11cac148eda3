"""Dense complex tensor algebra used by every simulator in the suite.

Tensors are plain ``numpy`` arrays of dtype complex128.  All data is kept in
row-major (C) order; every reshape in this package is a view of that
linearization, which makes results bit-reproducible across modules.

The three workhorses are :func:`contract` (pairwise tensor contraction),
:func:`svd_truncate` (SVD with a squared-weight truncation budget), and
:func:`haar_unitary` (Haar-distributed unitaries via Ginibre + QR with the
R-diagonal phase fix).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "SvdOutcome",
    "SvdConvergenceError",
    "contract",
    "svd_truncate",
    "haar_unitary",
    "haar_unitaries",
]

# Singular values equal within this tolerance of the last kept one are kept
# too, so truncation never depends on how the backend orders a degenerate
# group.
DEGENERACY_TOL = 1e-12


class SvdConvergenceError(RuntimeError):
    """Raised when every available SVD driver fails to converge."""


@dataclass
class SvdOutcome:
    """Truncated factorization ``m ~= left @ diag(singular_values) @ right``.

    ``left`` has orthonormal columns and ``right`` orthonormal rows.  The
    discarded weight is the exact sum of squares of the dropped singular
    values, accumulated in the order they were dropped.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray
    discarded_weight: float

    @property
    def rank(self) -> int:
        return len(self.singular_values)


def _as_complex(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.complex128)


def contract(a, axes_a: Sequence[int], b, axes_b: Sequence[int]) -> np.ndarray:
    """Contract tensor ``a`` with tensor ``b`` over the paired axes.

    The result carries the uncontracted axes of ``a`` (in their original
    order) followed by those of ``b``.  Axis lists must pair axes of equal
    extent.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    axes_a = list(axes_a)
    axes_b = list(axes_b)
    if len(axes_a) != len(axes_b):
        raise ValueError(f"axis lists differ in length: {axes_a} vs {axes_b}")
    for ax, nd, name in ((axes_a, a.ndim, "a"), (axes_b, b.ndim, "b")):
        for i in ax:
            if not -nd <= i < nd:
                raise IndexError(f"axis {i} out of range for rank-{nd} tensor {name}")
    for ia, ib in zip(axes_a, axes_b):
        if a.shape[ia] != b.shape[ib]:
            raise ValueError(
                f"axis extent mismatch: a.shape[{ia}]={a.shape[ia]} vs "
                f"b.shape[{ib}]={b.shape[ib]}"
            )
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def _svd(m: np.ndarray):
    """Full SVD with a fallback LAPACK driver; never fails silently."""
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
    except Exception as exc:  # pragma: no cover - driver-dependent
        raise SvdConvergenceError(f"SVD failed to converge on shape {m.shape}") from exc


def svd_truncate(m, max_rank: int | None = None, weight_budget: float = 0.0) -> SvdOutcome:
    """SVD of a matrix, truncated by a squared-weight budget and a rank cap.

    Drops the longest suffix of singular values whose summed squares stay
    within ``weight_budget`` (strictly ``<=``), then enforces ``max_rank`` if
    the kept rank still exceeds it.  At least one singular value is always
    kept.  Values tied (within ``DEGENERACY_TOL``) with the last kept one are
    retained even when the budget would allow dropping them.
    """
    m = _as_complex(m)
    if m.ndim != 2:
        raise ValueError(f"svd_truncate expects rank-2 input, got shape {m.shape}")
    if weight_budget < 0:
        raise ValueError("weight_budget must be >= 0")
    if max_rank is not None and max_rank < 1:
        raise ValueError("max_rank must be >= 1")

    u, s, vh = _svd(m)
    n = len(s)

    # Largest suffix with squared sum <= budget, accumulated from the tail so
    # the recorded discard matches the arithmetic used for the decision.
    keep = n
    acc = 0.0
    for i in range(n - 1, 0, -1):
        nxt = acc + s[i] * s[i]
        if nxt > weight_budget:
            break
        acc = nxt
        keep = i
    discarded = acc if keep < n else 0.0

    # Degenerate boundary: keep everything equal to the last kept value.
    while keep < n and s[keep] >= s[keep - 1] - DEGENERACY_TOL:
        discarded -= s[keep] * s[keep]
        keep += 1
    discarded = max(discarded, 0.0)

    if max_rank is not None and keep > max_rank:
        discarded += float(np.sum(s[max_rank:keep] ** 2))
        keep = max_rank

    return SvdOutcome(
        left=np.ascontiguousarray(u[:, :keep]),
        singular_values=s[:keep].copy(),
        right=np.ascontiguousarray(vh[:keep, :]),
        discarded_weight=float(discarded),
    )


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a ``dim x dim`` unitary from the Haar measure.

    QR of a complex standard-Gaussian (Ginibre) matrix; each column of Q is
    divided by the phase of the matching R diagonal entry, which makes the
    distribution exactly Haar rather than merely unitary.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return haar_unitaries(dim, 1, rng)[0]


def haar_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stacked Haar unitaries, shape ``(count, dim, dim)``; vectorized QR."""
    z = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    diag = np.einsum("...ii->...i", r)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]
