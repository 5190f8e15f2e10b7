"""Common eigenspaces of a symmetric association scheme.

The adjacency matrices commute and are real symmetric, so one random real
combination of them usually already separates every common eigenspace.  The
grouping obtained from its spectrum is then checked against each ``A_k``
individually and refined if some group turns out to mix eigenspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DecompositionUnstable, FormatError, NonSymmetric
from .matkernel import (
    decode_matrix,
    default_tol,
    encode_matrix,
    herm_eig,
    max_abs,
    numeric_rank,
    unitarity_residual,
)
from .report import VerificationReport
from .scheme import AssociationScheme

GROUP_GAP = 1e-6


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Minimal idempotents, eigenvalue table and eigenbasis of a scheme.

    Attributes
    ----------
    idempotents : ndarray, shape (d+1, N, N)
        ``E_i``, the orthogonal projection onto the common eigenspace ``W_i``.
    eigentable : ndarray, shape (d+1, d+1)
        ``eigentable[k, i]`` is the eigenvalue of ``A_k`` on ``W_i``.
    multiplicities : tuple of int
        ``dim W_i``.
    eigenbasis : ndarray, shape (N, N)
        Row ``r`` is an orthonormal eigenvector; rows are grouped ``W_0``,
        ``W_1``, ... in index order.  ``W_0`` is spanned by the all-ones
        vector.
    """

    idempotents: np.ndarray
    eigentable: np.ndarray
    multiplicities: tuple[int, ...]
    eigenbasis: np.ndarray
    seed: int = 0

    @property
    def n(self) -> int:
        return self.eigenbasis.shape[0]

    @property
    def d(self) -> int:
        return len(self.multiplicities) - 1

    def block(self, i: int) -> np.ndarray:
        """Rows of the eigenbasis spanning ``W_i``."""
        start = sum(self.multiplicities[:i])
        return self.eigenbasis[start : start + self.multiplicities[i]]

    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for m in self.multiplicities:
            out.append(slice(start, start + m))
            start += m
        return out


@dataclass(frozen=True)
class PseudocyclicProfile:
    is_pseudocyclic: bool
    t: int | None


def _split_by_gaps(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Index groups of sorted ``values`` separated by jumps larger than ``gap``."""
    cuts = np.nonzero(np.diff(values) > gap)[0] + 1
    return np.split(np.arange(len(values)), cuts)


def _refine(Q: np.ndarray, mats: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split the column space of ``Q`` into common eigenspaces of ``mats``."""
    groups = [Q]
    for A in mats:
        nxt = []
        for G in groups:
            w, R = np.linalg.eigh(G.T @ A @ G)
            for idx in _split_by_gaps(w, gap):
                nxt.append(G @ R[:, idx])
        groups = nxt
    return groups


def decompose(
    s: AssociationScheme, seed: int = 42, tol: float | None = None, coeffs=None
) -> SpectralData:
    """Spectral decomposition of the Bose-Mesner algebra of ``s``.

    Parameters
    ----------
    s : AssociationScheme
        Must be symmetric.
    seed : int
        Seeds the coefficients of the random combination ``sum_k c_k A_k``.
    tol : float, optional
        Acceptance threshold for "acts as a scalar"; defaults to
        ``1e-8 * max(1, N)``.
    coeffs : array_like, optional
        Explicit combination coefficients, overriding ``seed``.  A degenerate
        choice (e.g. only ``A_0``) exercises the refinement path.
    """
    if not s.is_symmetric:
        raise NonSymmetric("spectral decomposition requires a symmetric scheme")
    n, m = s.n, s.d + 1
    tol = default_tol(n) if tol is None else tol
    A = s.adjacency_stack()
    if coeffs is None:
        coeffs = np.random.default_rng(seed).uniform(0.5, 1.5, size=m)
    M = np.tensordot(coeffs, A, axes=1)
    w, Q = herm_eig(M, tol)
    gap = GROUP_GAP * max(max_abs(M), 1.0)
    groups = [Q[:, idx] for idx in _split_by_gaps(w, gap)]

    def scalar_on(G):
        thetas, worst = [], 0.0
        for Ak in A:
            AG = Ak @ G
            theta = float(np.trace(G.T @ AG)) / G.shape[1]
            thetas.append(theta)
            worst = max(worst, max_abs(AG - theta * G))
        return np.array(thetas), worst

    checked = [scalar_on(G) for G in groups]
    if any(res > tol for _, res in checked):
        groups = _refine(Q, A, GROUP_GAP * max(float(A.max()), 1.0))
        # a refinement pass may split one eigenspace more than once; merge
        # groups whose eigenvalue columns agree
        merged: list[tuple[np.ndarray, np.ndarray]] = []
        for G in groups:
            theta, _ = scalar_on(G)
            for j, (H, th) in enumerate(merged):
                if np.allclose(th, theta, atol=gap):
                    merged[j] = (np.hstack([H, G]), th)
                    break
            else:
                merged.append((G, theta))
        groups = [G for G, _ in merged]
        checked = [scalar_on(G) for G in groups]
        if any(res > tol for _, res in checked):
            raise DecompositionUnstable("refined groups are still not common eigenspaces")
    if len(groups) != m:
        raise DecompositionUnstable(f"found {len(groups)} common eigenspaces, expected {m}")

    # W_0 is the eigenspace holding the all-ones vector; order the rest by
    # descending eigenvalue columns so the labelling does not depend on seed
    ones = np.ones(n) / np.sqrt(n)
    weight = [np.linalg.norm(G.T @ ones) for G in groups]
    first = int(np.argmax(weight))
    rest = [i for i in range(m) if i != first]
    rest.sort(key=lambda i: tuple(-np.round(checked[i][0][1:], 6)))
    order = [first] + rest

    thetas = np.column_stack([checked[i][0] for i in order])
    basis = []
    for i in order:
        G = groups[i]
        # re-orthonormalize each block: vectors from different refinement
        # branches are only orthogonal up to rounding
        Gq, _ = np.linalg.qr(G)
        basis.append(Gq)
    V = np.hstack(basis)
    if basis[0].shape[1] == 1:
        V[:, 0] = ones
    mult = tuple(b.shape[1] for b in basis)
    E = np.stack([V[:, sl] @ V[:, sl].T for sl in _slices(mult)])
    for arr in (E, thetas, V):
        arr.setflags(write=False)
    return SpectralData(E, thetas, mult, np.ascontiguousarray(V.T), seed)


def _slices(sizes):
    out, start = [], 0
    for sz in sizes:
        out.append(slice(start, start + sz))
        start += sz
    return out


def pseudocyclic_profile(sd: SpectralData) -> PseudocyclicProfile:
    m = sd.multiplicities
    ok = len(m) >= 2 and m[0] == 1 and len(set(m[1:])) == 1
    return PseudocyclicProfile(ok, m[1] if ok else None)


def product_classes(eigentable, tol: float = 1e-9) -> list[list[int]]:
    """Partition eigenspace indices by the products ``conj(theta_k) * theta_l``.

    ``i ~ i'`` iff ``conj(T[k, i]) T[l, i] == conj(T[k, i']) T[l, i']`` for
    all ``k, l``.  On such a class every ``F_k^H F_l`` acts as one scalar.
    """
    T = np.asarray(eigentable, dtype=complex)
    prods = [np.outer(T[:, i].conj(), T[:, i]) for i in range(T.shape[1])]
    classes: list[list[int]] = []
    for i, P in enumerate(prods):
        for cls in classes:
            if max_abs(prods[cls[0]] - P) <= tol * max(1.0, max_abs(P)):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def eigenvalue_products(sd: SpectralData, tol: float = 1e-9) -> list[list[int]]:
    return product_classes(sd.eigentable, tol)


def spectral_to_dict(sd: SpectralData) -> dict:
    return {
        "format": "asq-spectral",
        "version": 1,
        "seed": sd.seed,
        "multiplicities": list(sd.multiplicities),
        "eigentable": sd.eigentable.tolist(),
        "idempotents": encode_matrix(sd.idempotents),
        "eigenbasis": encode_matrix(sd.eigenbasis),
    }


def spectral_from_dict(obj) -> SpectralData:
    if obj.get("format") != "asq-spectral":
        raise FormatError("not an asq-spectral document")
    E = decode_matrix(obj["idempotents"], ndim=3)
    V = decode_matrix(obj["eigenbasis"], ndim=2)
    if max_abs(E.imag) == 0 and max_abs(V.imag) == 0:
        E, V = E.real, V.real
    return SpectralData(
        E,
        np.asarray(obj["eigentable"], dtype=float),
        tuple(int(x) for x in obj["multiplicities"]),
        V,
        int(obj.get("seed", 0)),
    )


def verify_spectral(s: AssociationScheme, sd: SpectralData, tol: float | None = None) -> VerificationReport:
    """Recheck the defining identities of the decomposition against ``s``."""
    tol = default_tol(s.n) if tol is None else tol
    E, T = sd.idempotents, sd.eigentable
    m = s.d + 1
    rep = VerificationReport(metadata={"multiplicities": list(sd.multiplicities), "seed": sd.seed})
    rep.add("class_count", abs(len(sd.multiplicities) - m), 0)
    rep.add("hermitian", max(max_abs(Ei - Ei.conj().T) for Ei in E), tol)
    worst = 0.0
    for i in range(len(E)):
        for j in range(len(E)):
            target = E[i] if i == j else 0.0
            worst = max(worst, max_abs(E[i] @ E[j] - target))
    rep.add("idempotency", worst, tol)
    rep.add("resolution_of_identity", max_abs(E.sum(axis=0) - np.eye(s.n)), tol)
    A = s.adjacency_stack()
    rep.add("reconstruction", max_abs(A - np.tensordot(T, E, axes=1)), tol)
    rep.add("identity_row", max_abs(T[0] - 1.0), tol)
    rep.add("perron_column", max_abs(T[:, 0] - s.valencies), tol)
    closest = min(
        (max_abs(T[:, i] - T[:, j]) for i in range(m) for j in range(i)), default=np.inf
    )
    rep.add("distinct_columns", 0 if closest > GROUP_GAP else 1, 0)
    rank_gap = sum(abs(numeric_rank(Ei, tol) - mi) for Ei, mi in zip(E, sd.multiplicities))
    rep.add("rank_matches_multiplicity", rank_gap, 0)
    rep.add("multiplicity_sum", abs(sum(sd.multiplicities) - s.n), 0)
    rep.add("eigenbasis_unitary", unitarity_residual(sd.eigenbasis), tol)
    return rep
