"""Association schemes stored as relation tables.

A scheme on ``N`` points with ``d`` classes is kept as one ``N x N`` integer
array ``relation`` where ``relation[x, y] == i`` means entry ``(x, y)`` of
``A_i`` is 1.  The 0/1 matrices are materialized on demand.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path

import numpy as np

from .errors import BadDivisor, FormatError, IndexOutOfRange, NonSymmetric, SizeCap
from .field import FieldCtx, class_table
from .report import VerificationReport

SCHEME_FORMAT = "asq-scheme"
SCHEME_VERSION = 1


@dataclass(frozen=True, eq=False)
class AssociationScheme:
    n: int
    d: int
    relation: np.ndarray
    name: str = ""

    def __post_init__(self):
        rel = np.array(self.relation, dtype=np.int64)
        if rel.shape != (self.n, self.n):
            raise ValueError(f"relation must be {self.n}x{self.n}, got {rel.shape}")
        if rel.size and (rel.min() < 0 or rel.max() > self.d):
            raise ValueError(f"relation entries must lie in [0, {self.d}]")
        rel.setflags(write=False)
        object.__setattr__(self, "relation", rel)

    def __eq__(self, other):
        if not isinstance(other, AssociationScheme):
            return NotImplemented
        return (self.n, self.d) == (other.n, other.d) and np.array_equal(
            self.relation, other.relation
        )

    def __hash__(self):
        return scheme_hash(self)

    @cached_property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.relation, self.relation.T))

    @cached_property
    def valencies(self) -> np.ndarray:
        """Row sums of each ``A_i`` taken from row 0 of the relation table."""
        return np.bincount(self.relation[0], minlength=self.d + 1)

    def adjacency(self, i: int, dtype=float) -> np.ndarray:
        return adjacency_matrix(self, i, dtype=dtype)

    def adjacency_stack(self, dtype=float) -> np.ndarray:
        """All ``A_0..A_d`` as a ``(d+1, N, N)`` array."""
        return np.stack([self.adjacency(i, dtype) for i in range(self.d + 1)])

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<AssociationScheme{label} N={self.n} d={self.d}>"


@dataclass(frozen=True)
class IntersectionNumbers:
    """Structure constants ``A_i A_j = sum_k p[i, j, k] A_k``."""

    p: np.ndarray
    valencies: np.ndarray


def adjacency_matrix(s: AssociationScheme, i: int, dtype=float) -> np.ndarray:
    if not 0 <= i <= s.d:
        raise IndexOutOfRange(f"class index {i} outside [0, {s.d}]")
    return (s.relation == i).astype(dtype)


def cyclotomic_scheme(ctx: FieldCtx, d: int) -> AssociationScheme:
    """Cyclotomic scheme on GF(q): ``x ~_i y`` iff ``x - y`` lies in ``C_{i-1}``.

    Only symmetric schemes are built, i.e. ``-1`` must lie in the subgroup
    of ``d``-th powers; that holds iff ``(q-1)/d`` is even or ``p == 2``.
    """
    q = ctx.q
    if d <= 1 or (q - 1) % d:
        raise BadDivisor(f"need d > 1 dividing q - 1 = {q - 1}, got d = {d}")
    if ctx.p != 2 and ((q - 1) // d) % 2:
        raise NonSymmetric(
            f"-1 lies outside the index-{d} subgroup of GF({q})*; the scheme is not symmetric"
        )
    table = np.array(class_table(ctx, d), dtype=np.int64)
    idx = np.arange(q)
    # packed difference x - y, digit by digit
    diff = np.zeros((q, q), dtype=np.int64)
    xs, ys, scale = idx.copy(), idx.copy(), 1
    for _ in range(ctx.f):
        dx, dy = xs % ctx.p, ys % ctx.p
        diff += ((dx[:, None] - dy[None, :]) % ctx.p) * scale
        xs, ys, scale = xs // ctx.p, ys // ctx.p, scale * ctx.p
    relation = table[diff] + 1
    np.fill_diagonal(relation, 0)
    return AssociationScheme(q, d, relation, name=f"cyclotomic(q={q}, d={d})")


def hamming_scheme(n: int) -> AssociationScheme:
    """Binary Hamming scheme H(n, 2): relation = Hamming distance."""
    if not 1 <= n <= 12:
        raise SizeCap(f"word length must lie in [1, 12], got {n}")
    words = np.arange(2**n)
    xor = words[:, None] ^ words[None, :]
    dist = np.zeros_like(xor)
    for b in range(n):
        dist += (xor >> b) & 1
    return AssociationScheme(2**n, n, dist, name=f"hamming(n={n})")


def one_class_scheme(n: int) -> AssociationScheme:
    if n < 2:
        raise ValueError(f"one-class scheme needs at least 2 points, got {n}")
    rel = np.ones((n, n), dtype=np.int64)
    np.fill_diagonal(rel, 0)
    return AssociationScheme(n, 1, rel, name=f"one-class(N={n})")


def intersection_counts(s: AssociationScheme) -> tuple[np.ndarray, int]:
    """Brute-force structure constants and the number of pairs violating axiom 4.

    For every pair ``(x, y)`` count ``#{z : rel[x,z] = i, rel[z,y] = j}``; the
    first pair seen in each class ``k = rel[x,y]`` fixes ``p[i, j, k]`` and
    every later pair in that class must reproduce it.
    """
    n, m = s.n, s.d + 1
    rel = s.relation
    ref = np.zeros((m * m, m), dtype=np.int64)
    seen = np.zeros(m, dtype=bool)
    violations = 0
    offsets = np.arange(n)[None, :] * (m * m)
    for x in range(n):
        keys = rel[x][:, None] * m + rel  # keys[z, y]
        counts = np.bincount((keys + offsets).ravel(), minlength=n * m * m)
        counts = counts.reshape(n, m * m)  # counts[y, i*m + j]
        for k in range(m):
            rows = counts[rel[x] == k]
            if not len(rows):
                continue
            if not seen[k]:
                ref[:, k] = rows[0]
                seen[k] = True
            violations += int(np.any(rows != ref[:, k], axis=1).sum())
    return ref.reshape(m, m, m), violations


def intersection_numbers(s: AssociationScheme) -> IntersectionNumbers:
    p, _ = intersection_counts(s)
    return IntersectionNumbers(p, s.valencies.copy())


def verify_axioms(s: AssociationScheme) -> VerificationReport:
    """Check the four scheme axioms; residuals count violating entries."""
    rel = s.relation
    n, m = s.n, s.d + 1
    rep = VerificationReport(metadata={"n": n, "d": s.d, "symmetric": s.is_symmetric})

    off = ~np.eye(n, dtype=bool)
    rep.add("axiom1_identity", int((np.diag(rel) != 0).sum() + (rel[off] == 0).sum()), 0)

    out_of_range = int(((rel < 0) | (rel > s.d)).sum())
    empty = int((np.bincount(rel.ravel(), minlength=m)[:m] == 0).sum())
    rep.add("axiom2_partition", out_of_range + empty, 0)

    # A_i^T must be a single class A_i', and i -> i' a permutation
    bad_transpose, images = 0, set()
    for i in range(m):
        vals = np.unique(rel.T[rel == i])
        if len(vals) != 1:
            bad_transpose += 1
        else:
            images.add(int(vals[0]))
    bad_transpose += m - bad_transpose - len(images)
    rep.add("axiom3_transpose", bad_transpose, 0)

    p, violations = intersection_counts(s)
    rep.add("axiom4_products", violations, 0)
    rep.metadata["valencies"] = [int(v) for v in s.valencies]
    return rep


def scheme_hash(s: AssociationScheme) -> int:
    """Stable 63-bit hash of ``(n, d, relation)``."""
    h = hashlib.sha256()
    h.update(np.array([s.n, s.d], dtype="<i8").tobytes())
    h.update(np.ascontiguousarray(s.relation, dtype="<i8").tobytes())
    return int.from_bytes(h.digest()[:8], "little") >> 1


def scheme_to_dict(s: AssociationScheme) -> dict:
    return {
        "format": SCHEME_FORMAT,
        "version": SCHEME_VERSION,
        "n": s.n,
        "d": s.d,
        "relation": [int(v) for v in s.relation.ravel()],
    }


def scheme_from_dict(obj) -> AssociationScheme:
    try:
        if obj.get("format") != SCHEME_FORMAT:
            raise FormatError(f"not an {SCHEME_FORMAT} document")
        if obj.get("version") != SCHEME_VERSION:
            raise FormatError(f"unsupported scheme version {obj.get('version')!r}")
        n, d, flat = obj["n"], obj["d"], obj["relation"]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in [n, d, *flat]):
            raise FormatError("scheme fields must be integers")
        if len(flat) != n * n:
            raise FormatError(f"relation has {len(flat)} entries, expected {n * n}")
        return AssociationScheme(n, d, np.array(flat, dtype=np.int64).reshape(n, n))
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed scheme document: {exc}") from exc


def save_scheme(s: AssociationScheme, path) -> None:
    Path(path).write_text(json.dumps(scheme_to_dict(s)) + "\n")


def load_scheme(path) -> AssociationScheme:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return scheme_from_dict(obj)


def all_products_exact(s: AssociationScheme, p: np.ndarray) -> bool:
    """Exact integer check of ``A_i A_j == sum_k p[i,j,k] A_k`` for all ``i, j``."""
    A = s.adjacency_stack(dtype=np.int64)
    for i, j in product(range(s.d + 1), repeat=2):
        rhs = np.tensordot(p[i, j], A, axes=1)
        if not np.array_equal(A[i] @ A[j], rhs):
            return False
    return True
