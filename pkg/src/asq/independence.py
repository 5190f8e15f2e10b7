"""Independence numbers of scheme operator systems, with checkable certificates.

Three quantities are covered:

* ``alpha``: a set of ``N`` orthonormal vectors whose cross terms
  ``|phi_i><phi_j|`` are orthogonal to the operator system.  The union of
  orthonormal bases of the common eigenspaces always works.
* ``alpha_q``: the largest code projector ``P`` with ``P X P`` proportional
  to ``P`` for all ``X`` in the system; the projector onto the largest
  eigenspace is optimal.
* a lower bound on the unitary entanglement-assisted number: for a
  pseudocyclic scheme ``t**2 * d`` unitaries assembled from generalized
  Pauli ("spin") matrices placed in the eigenspace blocks.

Every builder has a matching ``verify_*`` function that recomputes the
defining conditions from scratch and reports the worst residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import DensityOperator, KrausChannel, OperatorSystem
from .errors import DimMismatch, FormatError, NotPseudocyclic, TSmall
from .matkernel import (
    complete_to_unitary,
    decode_matrix,
    default_tol,
    encode_matrix,
    max_abs,
    numeric_rank,
)
from .report import VerificationReport
from .spectral import SpectralData, eigenvalue_products, pseudocyclic_profile

CERT_FORMAT = "asq-cert"
CERT_VERSION = 1


@dataclass(frozen=True, eq=False)
class AlphaCertificate:
    vectors: np.ndarray  # (M, D), one vector per row

    @property
    def size(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True, eq=False)
class AlphaQCertificate:
    projector: np.ndarray
    dim: int
    scalars: tuple[float, ...]
    eigenspaces: tuple[int, ...] = ()


@dataclass(frozen=True, eq=False)
class SpinBasis:
    t: int
    mats: np.ndarray  # (t*t, t, t); index j*t + k holds S_{j,k}

    def __getitem__(self, jk: tuple[int, int]) -> np.ndarray:
        j, k = jk
        return self.mats[j * self.t + k]

    def __len__(self) -> int:
        return len(self.mats)


@dataclass(frozen=True, eq=False)
class AlphaUCertificate:
    rho: DensityOperator
    unitaries: np.ndarray  # (N, D, D)
    block_data: np.ndarray | None = field(default=None, repr=False)  # (N, t, D)

    @property
    def size(self) -> int:
        return self.unitaries.shape[0]


@dataclass(frozen=True)
class BoundsReport:
    D: int
    d: int
    alpha_q: int
    alpha: int
    alpha_u_lower: int
    alpha_upper_trivial: int
    alpha_u_upper_trivial: int
    pseudocyclic: bool
    t: int | None
    ratio: float | None  # t**2 d / D**2, pseudocyclic with t >= 2 only

    def ordering_checks(self) -> VerificationReport:
        """The orderings that must hold between the reported numbers."""
        rep = VerificationReport()
        rep.add("alpha_q_le_alpha", max(0, self.alpha_q - self.alpha), 0)
        rep.add("alpha_le_dim", max(0, self.alpha - self.alpha_upper_trivial), 0)
        rep.add("alpha_u_interval", max(0, self.alpha_u_lower - self.alpha_u_upper_trivial), 0)
        if self.ratio is not None:
            rep.add("alpha_u_gt_alpha", max(0, self.alpha + 1 - self.alpha_u_lower), 0)
            rep.add("ratio_in_unit_interval", 0 if 0 < self.ratio <= 1 else 1, 0)
        return rep

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "d": self.d,
            "alpha_q": self.alpha_q,
            "alpha": self.alpha,
            "alpha_u_lower": self.alpha_u_lower,
            "alpha_upper_trivial": self.alpha_upper_trivial,
            "alpha_u_upper_trivial": self.alpha_u_upper_trivial,
            "pseudocyclic": self.pseudocyclic,
            "t": self.t,
            "ratio": self.ratio,
        }


def _check_dim(S: OperatorSystem, D: int) -> None:
    if S.n != D:
        raise DimMismatch(f"certificate on dimension {D}, operator system on {S.n}")


# -- alpha


def build_alpha_certificate(sd: SpectralData) -> AlphaCertificate:
    """Union of orthonormal bases of the common eigenspaces (``N`` vectors)."""
    return AlphaCertificate(np.array(sd.eigenbasis, dtype=complex))


def verify_alpha_certificate(
    cert: AlphaCertificate, S: OperatorSystem, tol: float | None = None
) -> VerificationReport:
    Phi = np.atleast_2d(np.asarray(cert.vectors))
    M, D = Phi.shape
    _check_dim(S, D)
    tol = default_tol(D) if tol is None else tol
    rep = VerificationReport(metadata={"kind": "alpha", "size": M, "dim": D})
    rep.add("size_le_dim", max(0, M - D), 0)
    G = Phi.conj() @ Phi.T  # G[j, i] = <phi_j|phi_i>
    rep.add("unit_norm", max_abs(np.diag(G) - 1.0), tol)
    off = ~np.eye(M, dtype=bool)
    rep.add("orthogonality", max_abs(G[off]), tol)
    worst = 0.0
    for E in S.basis:
        # Tr(E |phi_i><phi_j|) = <phi_j|E|phi_i>
        cross = Phi.conj() @ E @ Phi.T
        worst = max(worst, max_abs(cross[off]))
    rep.add("s_perp", worst, tol)
    return rep


# -- alpha_q


def alpha_q(sd: SpectralData) -> tuple[int, AlphaQCertificate]:
    """Quantum independence number and an optimal code projector.

    Eigenspaces on which every product ``F_k^H F_l`` acts as the same
    scalar are pooled; the value is the largest pooled dimension.  With
    ``A_0 = I`` among the Kraus operators every class is a singleton and the
    value is the largest multiplicity.  Ties go to the lowest index.
    """
    classes = eigenvalue_products(sd)
    sizes = [sum(sd.multiplicities[i] for i in cls) for cls in classes]
    best = classes[int(np.argmax(sizes))]
    P = np.sum([sd.idempotents[i] for i in best], axis=0)
    trP = float(np.trace(P).real)
    scalars = tuple(float(np.trace(P @ E @ P).real) / trP for E in sd.idempotents)
    value = max(sizes)
    return value, AlphaQCertificate(P, value, scalars, tuple(best))


def verify_alpha_q_certificate(
    cert: AlphaQCertificate, S: OperatorSystem, tol: float | None = None
) -> VerificationReport:
    P = np.asarray(cert.projector)
    _check_dim(S, P.shape[0])
    tol = default_tol(P.shape[0]) if tol is None else tol
    rank = numeric_rank(P, tol)
    rep = VerificationReport(metadata={"kind": "alpha_q", "rank": rank, "claimed_dim": cert.dim})
    rep.add("hermitian", max_abs(P - P.conj().T), tol)
    rep.add("idempotent", max_abs(P @ P - P), tol)
    trP = complex(np.trace(P))
    rep.add("nonzero", 0 if abs(trP) > 0.5 else 1, 0)
    rep.add("rank_matches_dim", abs(rank - cert.dim), 0)
    worst, lambdas = 0.0, []
    for X in S.basis:
        PXP = P @ X @ P
        lam = complex(np.trace(PXP)) / trP if abs(trP) > 0 else 0.0
        lambdas.append(lam)
        worst = max(worst, max_abs(PXP - lam * P))
    rep.add("scalar_action", worst, tol)
    rep.metadata["scalars"] = [[float(z.real), float(z.imag)] for z in np.asarray(lambdas, complex)]
    return rep


def kraus_scalar_residual(ch: KrausChannel, P) -> float:
    """``max_{k,l} |F_k^H F_l P - lambda_kl P|`` over all Kraus pairs."""
    P = np.asarray(P)
    trP = complex(np.trace(P))
    worst = 0.0
    for X in ch.products():
        XP = X @ P
        lam = complex(np.trace(P @ XP)) / trP
        worst = max(worst, max_abs(XP - lam * P))
    return worst


# -- unitary entanglement-assisted lower bound


def spin_basis(t: int) -> SpinBasis:
    """The ``t**2`` matrices ``S_{j,k} = sum_r exp(2 pi i j r / t) E_{r, r+k}``."""
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    r = np.arange(t)
    mats = np.zeros((t * t, t, t), dtype=complex)
    for j in range(t):
        phase = np.exp(2j * np.pi * j * r / t)
        for k in range(t):
            mats[j * t + k, r, (r + k) % t] = phase
    mats.setflags(write=False)
    return SpinBasis(t, mats)


def build_alpha_u_certificate(
    sd: SpectralData, S: OperatorSystem | None = None, tol: float | None = None
) -> AlphaUCertificate:
    """``t**2 d`` unitaries with ``Tr(U_m'^H rho U_m E_k) = 0`` for ``m != m'``.

    With ``W`` the first ``t`` standard basis vectors, ``rho = W W^H / t`` and
    ``V`` the eigenbasis (columns grouped by eigenspace), put
    ``B_m = W^H U_m V``.  The condition becomes
    ``Tr(B_m'(k)^H B_m(k)) = 0`` on every eigenspace block ``k``.  Unitary
    ``m = i + (j-1) t**2`` places spin matrix ``C_i`` in block ``j`` and zeros
    elsewhere, so distinct unitaries either use disjoint blocks or
    Hilbert-Schmidt orthogonal spin matrices.  ``U_m`` is recovered by
    completing the rows of ``B_m`` to a unitary and undoing ``V``.
    """
    prof = pseudocyclic_profile(sd)
    if not prof.is_pseudocyclic:
        raise NotPseudocyclic(f"multiplicities {sd.multiplicities} are not pseudocyclic")
    t, d, D = prof.t, sd.d, sd.n
    if t < 2:
        raise TSmall(f"construction needs t >= 2, got t = {t}")
    if S is not None:
        _check_dim(S, D)
    tol = default_tol(D) if tol is None else tol

    C = spin_basis(t).mats
    # completing the columns w_1..w_t of the identity gives the identity
    W_full = np.eye(D, dtype=complex)
    V_adj = np.asarray(sd.eigenbasis, dtype=complex).conj()  # V^H, V = eigenbasis^T
    slices = sd.block_slices()
    rho = np.zeros((D, D), dtype=complex)
    rho[np.arange(t), np.arange(t)] = 1.0 / t

    n_units = t * t * d
    unitaries = np.empty((n_units, D, D), dtype=complex)
    blocks = np.zeros((n_units, t, D), dtype=complex)
    for m in range(n_units):
        j, i = m // (t * t) + 1, m % (t * t)
        blocks[m][:, slices[j]] = C[i]
        B_full = complete_to_unitary(blocks[m], tol)
        unitaries[m] = W_full @ B_full @ V_adj
    for arr in (unitaries, blocks):
        arr.setflags(write=False)
    return AlphaUCertificate(DensityOperator(rho), unitaries, blocks)


def block_condition_residual(blocks, multiplicities) -> float:
    """``max |Tr(B_m'(k)^H B_m(k))|`` over ``m != m'`` and blocks ``k``."""
    B = np.asarray(blocks)
    worst, start = 0.0, 0
    off = ~np.eye(B.shape[0], dtype=bool)
    for size in multiplicities:
        Bk = B[:, :, start : start + size].reshape(B.shape[0], -1)
        G = Bk.conj() @ Bk.T
        worst = max(worst, max_abs(G[off]) if B.shape[0] > 1 else 0.0)
        start += size
    return worst


def verify_alpha_u_certificate(
    cert: AlphaUCertificate, S: OperatorSystem, tol: float | None = None
) -> VerificationReport:
    """Recheck the state, unitarity and orthogonality to ``S`` of every pair.

    All ordered pairs ``m != m'`` are checked.
    """
    U = np.asarray(cert.unitaries)
    R = np.asarray(cert.rho.mat)
    N, D = U.shape[0], U.shape[1]
    if R.shape != (D, D):
        raise DimMismatch(f"state of shape {R.shape} for unitaries on dimension {D}")
    _check_dim(S, D)
    tol = default_tol(D) if tol is None else tol
    rep = VerificationReport(metadata={"kind": "alpha_u", "size": N, "dim": D})
    for name, value in cert.rho.residuals().items():
        rep.add(f"rho_{name}", value, tol)
    eye = np.eye(D)
    unit = max((max_abs(u @ u.conj().T - eye) for u in U), default=0.0)
    rep.add("unitarity", unit, tol)
    # T[p, m, k] = Tr(U_p^H rho U_m E_k)
    Y = (R @ U)[:, None] @ S.basis[None]  # Y[m, k] = rho U_m E_k
    T = U.conj().reshape(N, D * D) @ Y.reshape(-1, D * D).T
    T = T.reshape(N, N, -1)
    off = ~np.eye(N, dtype=bool)
    rep.add("s_perp", max_abs(np.abs(T)[off]) if N > 1 else 0.0, tol)
    return rep


def bounds_report(sd: SpectralData, S: OperatorSystem) -> BoundsReport:
    D = sd.n
    aq, _ = alpha_q(sd)
    prof = pseudocyclic_profile(sd)
    constructive = prof.is_pseudocyclic and prof.t >= 2
    lower = prof.t**2 * sd.d if constructive else D
    return BoundsReport(
        D=D,
        d=sd.d,
        alpha_q=aq,
        alpha=D,
        alpha_u_lower=lower,
        alpha_upper_trivial=D,
        alpha_u_upper_trivial=1 + D * D - S.dim,
        pseudocyclic=prof.is_pseudocyclic,
        t=prof.t,
        ratio=lower / D**2 if constructive else None,
    )


# -- certificate files


def cert_to_dict(cert, scheme_hash: int) -> dict:
    doc = {"format": CERT_FORMAT, "version": CERT_VERSION, "scheme_hash": int(scheme_hash)}
    if isinstance(cert, AlphaCertificate):
        doc.update(kind="alpha", vectors=encode_matrix(cert.vectors))
    elif isinstance(cert, AlphaQCertificate):
        doc.update(
            kind="alpha_q",
            dim=int(cert.dim),
            scalars=list(cert.scalars),
            eigenspaces=list(cert.eigenspaces),
            projector=encode_matrix(cert.projector),
        )
    elif isinstance(cert, AlphaUCertificate):
        doc.update(
            kind="alpha_u",
            rho=encode_matrix(cert.rho.mat),
            unitaries=encode_matrix(cert.unitaries),
        )
        if cert.block_data is not None:
            doc["blocks"] = encode_matrix(cert.block_data)
    else:
        raise TypeError(f"not a certificate: {type(cert).__name__}")
    return doc


def cert_from_dict(doc):
    """Inverse of :func:`cert_to_dict`; returns ``(certificate, scheme_hash)``."""
    try:
        if doc.get("format") != CERT_FORMAT:
            raise FormatError(f"not an {CERT_FORMAT} document")
        kind = doc.get("kind")
        h = doc["scheme_hash"]
        if not isinstance(h, int):
            raise FormatError("scheme_hash must be an integer")
        if kind == "alpha":
            return AlphaCertificate(decode_matrix(doc["vectors"], ndim=2)), h
        if kind == "alpha_q":
            return (
                AlphaQCertificate(
                    decode_matrix(doc["projector"], ndim=2),
                    int(doc["dim"]),
                    tuple(float(x) for x in doc.get("scalars", [])),
                    tuple(int(x) for x in doc.get("eigenspaces", [])),
                ),
                h,
            )
        if kind == "alpha_u":
            blocks = doc.get("blocks")
            return (
                AlphaUCertificate(
                    DensityOperator(decode_matrix(doc["rho"], ndim=2)),
                    decode_matrix(doc["unitaries"], ndim=3),
                    None if blocks is None else decode_matrix(blocks, ndim=3),
                ),
                h,
            )
        raise FormatError(f"unknown certificate kind {kind!r}")
    except (AttributeError, KeyError, TypeError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from exc


def verify_certificate(cert, S: OperatorSystem, tol: float | None = None) -> VerificationReport:
    if isinstance(cert, AlphaCertificate):
        return verify_alpha_certificate(cert, S, tol)
    if isinstance(cert, AlphaQCertificate):
        return verify_alpha_q_certificate(cert, S, tol)
    if isinstance(cert, AlphaUCertificate):
        return verify_alpha_u_certificate(cert, S, tol)
    raise TypeError(f"not a certificate: {type(cert).__name__}")
