"""The quantum channel whose Kraus operators are a scheme's adjacency matrices.

``sum_i A_i^T A_i`` is not a multiple of the identity in general, so the
adjacency matrices are normalized as ``F_i = A_i K^{-1/2}`` with
``K = sum_i A_i^T A_i``.  ``K`` lies in the Bose-Mesner algebra, hence so does
``K^{-1/2}``, and the products ``F_i^H F_j`` span the same operator system as
the ``A_i^T A_j``: the span of the minimal idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DimMismatch, SingularNormalizer
from .matkernel import default_tol, max_abs, numeric_rank
from .report import VerificationReport
from .scheme import AssociationScheme
from .spectral import SpectralData


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: np.ndarray  # (d+1, N, N)
    source_scheme: AssociationScheme | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def trace_preservation_residual(self) -> float:
        """``max|sum_i F_i^H F_i - I|``."""
        F = self.kraus
        S = np.einsum("iba,ibc->ac", F.conj(), F)
        return max_abs(S - np.eye(self.dim))

    def unitality_residual(self) -> float:
        """``max|sum_i F_i F_i^H - I|``; zero for symmetric schemes as well."""
        F = self.kraus
        S = np.einsum("iab,icb->ac", F, F.conj())
        return max_abs(S - np.eye(self.dim))

    def products(self) -> np.ndarray:
        """All ``F_i^H F_j`` as a ``((d+1)**2, N, N)`` array."""
        F = self.kraus
        return np.stack([F[i].conj().T @ F[j] for i, j in product(range(len(F)), repeat=2)])


@dataclass(frozen=True, eq=False)
class OperatorSystem:
    """A subspace of N x N matrices given by a Hilbert-Schmidt orthogonal basis."""

    basis: np.ndarray  # (dim, N, N)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def coefficients(self, X) -> np.ndarray:
        """Coordinates of the orthogonal projection of ``X`` onto the system."""
        B = self.basis
        norms = np.einsum("kab,kab->k", B.conj(), B).real
        return np.einsum("kab,ab->k", B.conj(), np.asarray(X)) / norms

    def projection_residual(self, X) -> float:
        """``max|X - proj(X)|``; zero iff ``X`` lies in the system."""
        X = np.asarray(X)
        return max_abs(X - np.tensordot(self.coefficients(X), self.basis, axes=1))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    mat: np.ndarray

    def residuals(self) -> dict[str, float]:
        M = self.mat
        return {
            "hermitian": max_abs(M - M.conj().T),
            "trace": abs(complex(np.trace(M)) - 1.0),
            "negativity": max(0.0, -float(np.linalg.eigvalsh((M + M.conj().T) / 2).min())),
        }

    def is_valid(self, tol: float = 1e-8) -> bool:
        return all(v <= tol for v in self.residuals().values())


def normalize_kraus(
    s: AssociationScheme, sd: SpectralData, tol: float | None = None
) -> KrausChannel:
    """Kraus operators ``F_i = A_i K^{-1/2}`` with ``sum_i F_i^H F_i = I``.

    ``K`` acts on ``W_j`` as ``sum_k theta[k, j]**2``, so its inverse square
    root is assembled directly from the idempotents.
    """
    tol = default_tol(s.n) if tol is None else tol
    kappa = np.sum(np.abs(sd.eigentable) ** 2, axis=0)
    if np.any(kappa <= tol):
        raise SingularNormalizer("sum of A_i^H A_i is singular")
    K_inv_sqrt = np.tensordot(kappa**-0.5, sd.idempotents, axes=1)
    A = s.adjacency_stack()
    F = A @ K_inv_sqrt
    F.setflags(write=False)
    ch = KrausChannel(F, s)
    if ch.trace_preservation_residual() > tol:
        raise SingularNormalizer("normalized Kraus operators are not trace preserving")
    return ch


def operator_system(sd: SpectralData) -> OperatorSystem:
    return OperatorSystem(np.asarray(sd.idempotents))


def in_s_perp(S: OperatorSystem, X, tol: float | None = None) -> tuple[bool, float]:
    """Whether ``X`` is Hilbert-Schmidt orthogonal to every basis element of ``S``."""
    X = np.asarray(X)
    if X.shape != S.basis.shape[1:]:
        raise DimMismatch(f"operator of shape {X.shape} vs system on {S.basis.shape[1:]}")
    tol = default_tol(S.n) if tol is None else tol
    residual = float(np.max(np.abs(np.einsum("kab,ab->k", S.basis.conj(), X))))
    return residual <= tol, residual


def apply_channel(ch: KrausChannel, rho: DensityOperator) -> DensityOperator:
    R = np.asarray(rho.mat)
    if R.shape != (ch.dim, ch.dim):
        raise DimMismatch(f"state of shape {R.shape} for a channel on dimension {ch.dim}")
    F = ch.kraus
    return DensityOperator(np.einsum("iab,bc,idc->ad", F, R, F.conj()))


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """``G G^H / Tr`` for a complex Gaussian ``n x rank`` matrix ``G``."""
    rank = n if rank is None else rank
    G = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    M = G @ G.conj().T
    return DensityOperator(M / np.trace(M).real)


def span_dimension(mats, tol: float = 1e-8) -> int:
    """Numeric dimension of the span of a stack of matrices."""
    mats = np.asarray(mats)
    return numeric_rank(mats.reshape(mats.shape[0], -1), tol)


def verify_channel(ch: KrausChannel, S: OperatorSystem, tol: float | None = None) -> VerificationReport:
    """Trace preservation and ``span{F_i^H F_j} == S``."""
    tol = default_tol(ch.dim) if tol is None else tol
    rep = VerificationReport()
    rep.add("trace_preservation", ch.trace_preservation_residual(), tol)
    rep.add("unitality", ch.unitality_residual(), tol)
    prods = ch.products()
    rep.add("products_in_S", max(S.projection_residual(X) for X in prods), tol)
    rep.add("span_dimension", abs(span_dimension(prods, tol) - S.dim), 0)
    rep.add("basis_dimension", abs(span_dimension(S.basis, tol) - S.dim), 0)
    rep.add("identity_in_S", S.projection_residual(np.eye(S.n)), tol)
    rep.add("self_adjoint", max(S.projection_residual(B.conj().T) for B in S.basis), tol)
    return rep
