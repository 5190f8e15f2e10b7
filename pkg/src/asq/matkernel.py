"""Dense complex linear algebra used throughout, plus JSON encoding of matrices.

Eigendecompositions and SVDs delegate to LAPACK through :mod:`numpy.linalg`;
the functions here add the contracts (Hermiticity checks, deterministic
unitary completion, relative rank thresholds) the rest of the package needs.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch, FormatError, NotHermitian, NotOrthonormal


def default_tol(dim: int) -> float:
    """Global verification threshold ``1e-8 * max(1, dim)``."""
    return 1e-8 * max(1, int(dim))


def max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def herm_eig(M, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending eigenvalues ``w`` and a unitary ``Q`` with
    ``M = Q @ diag(w) @ Q^H``.  Raises :class:`NotHermitian` when
    ``max|M - M^H| > tol``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {M.shape}")
    if max_abs(M - M.conj().T) > tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    H = (M + M.conj().T) / 2
    w, Q = np.linalg.eigh(H)
    return w, Q


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt inner product ``Tr(X Y^H)``."""
    X, Y = np.asarray(X), np.asarray(Y)
    if X.shape != Y.shape:
        raise DimMismatch(f"shapes {X.shape} and {Y.shape} differ")
    return complex(np.vdot(Y, X))


def orthonormality_residual(rows) -> float:
    """``max|R R^H - I|`` for a stack of row vectors ``R``."""
    R = np.atleast_2d(np.asarray(rows))
    return max_abs(R @ R.conj().T - np.eye(R.shape[0]))


def unitarity_residual(U) -> float:
    U = np.asarray(U)
    return max_abs(U @ U.conj().T - np.eye(U.shape[0]))


def complete_to_unitary(rows, tol: float = 1e-8) -> np.ndarray:
    """Extend ``r`` orthonormal rows to a ``D x D`` unitary.

    The given rows are copied unchanged.  Further rows come from
    Gram-Schmidt (two passes) on the standard basis vectors in ascending
    order; a candidate is skipped when its residual after projection is
    below ``1 / (2 sqrt(D))``.  If that threshold leaves the basis short the
    remaining rows are taken greedily by largest residual.
    """
    R = np.atleast_2d(np.asarray(rows, dtype=complex))
    r, D = R.shape
    if r > D:
        raise DimMismatch(f"{r} rows cannot be orthonormal in dimension {D}")
    if orthonormality_residual(R) > tol:
        raise NotOrthonormal("input rows are not orthonormal within tolerance")
    out = [R[i].copy() for i in range(r)]

    def residual(v):
        for _ in range(2):
            for u in out:
                v = v - np.vdot(u, v) * u
        return v

    threshold = 0.5 / np.sqrt(D)
    for k in range(D):
        if len(out) == D:
            break
        e = np.zeros(D, dtype=complex)
        e[k] = 1.0
        v = residual(e)
        nv = np.linalg.norm(v)
        if nv >= threshold:
            out.append(v / nv)
    while len(out) < D:
        cands = [residual(np.eye(D, dtype=complex)[k]) for k in range(D)]
        k = int(np.argmax([np.linalg.norm(v) for v in cands]))
        out.append(cands[k] / np.linalg.norm(cands[k]))
    return np.array(out)


def numeric_rank(M, tol: float = 1e-8) -> int:
    """Number of singular values above ``tol * max(|M_ij|)``.

    The threshold is relative to the largest entry, so a zero matrix has
    rank 0 and scaling ``M`` leaves the rank unchanged.
    """
    M = np.atleast_2d(np.asarray(M))
    scale = max_abs(M)
    if scale == 0.0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * scale))


# -- JSON encoding: complex entries as [re, im]


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return np.stack([M.real, M.imag], axis=-1).tolist()


def decode_matrix(obj, ndim: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"not a numeric [re, im] array: {exc}") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise FormatError("complex entries must be [re, im] pairs")
    out = arr[..., 0] + 1j * arr[..., 1]
    if ndim is not None and out.ndim != ndim:
        raise FormatError(f"expected a {ndim}-dimensional array, got {out.ndim}")
    if not np.all(np.isfinite(out)):
        raise FormatError("matrix entries must be finite")
    return out
