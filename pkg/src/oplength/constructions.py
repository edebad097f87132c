"""Explicit bounded-depth factorizations.

All constructions here share one discipline: the scalar factors they
emit are a deterministic function of the shape parameters alone (matrix
size, block order, corner indices, partition sizes), never of the input
values.  Only the diagonal factors carry the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import (
    BlockMatrix,
    DiagonalMatrix,
    ShapeMismatchError,
    fourier_unitary,
    normalized_trace,
    operator_norm,
)
from .certs import (
    FactorizationCertificate,
    RowDecomposition,
    conjugate,
    rebalance_diags,
)

__all__ = [
    "IsometryFamily",
    "ProjectionPartition",
    "FamilyRelationError",
    "CapacityError",
    "universal_depth1",
    "diagonal_depth1",
    "is_block_diagonal",
    "factor_through_family",
    "matrix_unit_family",
    "projection_isometries",
    "family_from_projections",
    "corner_embedding_certificate",
    "partition_row_decomposition",
    "pinch_certificate",
    "diagonal_embedding_certificate",
    "pinch",
    "diagonal_partition",
]


class FamilyRelationError(ValueError):
    """Isometry-family relations violated beyond tolerance."""


class CapacityError(ValueError):
    """The algebra is too small to host the requested orthogonal copies."""


@dataclass(frozen=True)
class IsometryFamily:
    """Data (p, q, a_i, b_i, c_i, d_i) with a_i b_j = delta_ij p, c_i d_j = delta_ij q.

    The rows b and columns c are jointly contractive:
    ||sum b_i b_i*|| <= 1 and ||sum c_j* c_j|| <= 1.
    """

    p: np.ndarray
    q: np.ndarray
    a: np.ndarray  # (n, k, k)
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def k(self) -> int:
        return self.a.shape[1]

    def validate(self, tol: float = 1e-10) -> None:
        n = self.n
        ab = np.einsum("iab,jbc->ijac", self.a, self.b, optimize=True)
        cd = np.einsum("iab,jbc->ijac", self.c, self.d, optimize=True)
        delta = np.eye(n)[:, :, None, None]
        if np.abs(ab - delta * self.p).max() > tol:
            raise FamilyRelationError("a_i b_j != delta_ij p")
        if np.abs(cd - delta * self.q).max() > tol:
            raise FamilyRelationError("c_i d_j != delta_ij q")
        if operator_norm(np.einsum("iab,icb->ac", self.b, self.b.conj())) > 1 + tol:
            raise FamilyRelationError("row sum b b* exceeds the unit ball")
        if operator_norm(np.einsum("iba,ibc->ac", self.c.conj(), self.c)) > 1 + tol:
            raise FamilyRelationError("column sum c* c exceeds the unit ball")


@dataclass(frozen=True)
class ProjectionPartition:
    """n pairwise-orthogonal projections of normalized trace exactly 1/n."""

    projections: np.ndarray  # (n, k, k)

    def __post_init__(self):
        P = np.asarray(self.projections, dtype=np.complex128)
        object.__setattr__(self, "projections", P)

    @property
    def n(self) -> int:
        return self.projections.shape[0]

    @property
    def k(self) -> int:
        return self.projections.shape[1]

    def validate(self, tol: float = 1e-10) -> None:
        P = self.projections
        n, k = self.n, self.k
        for m in range(n):
            pm = P[m]
            if np.abs(pm - pm.conj().T).max() > tol or np.abs(pm @ pm - pm).max() > tol:
                raise FamilyRelationError(f"partition element {m} is not a projection")
            if abs(normalized_trace(pm) - 1.0 / n) > 1e-12:
                raise FamilyRelationError(f"partition element {m} has trace != 1/n")
        total = P.sum(axis=0)
        for m in range(n):
            for mp in range(m + 1, n):
                if np.abs(P[m] @ P[mp]).max() > tol:
                    raise FamilyRelationError(f"elements {m}, {mp} are not orthogonal")
        if operator_norm(total) > 1 + tol:
            raise FamilyRelationError("partition sum exceeds the identity")


def diagonal_partition(n: int, k: int) -> ProjectionPartition:
    """The n diagonal-block projections of M_k (requires n | k)."""
    if k % n:
        raise ShapeMismatchError(f"{n} does not divide the block order {k}")
    r = k // n
    P = np.zeros((n, k, k), dtype=np.complex128)
    for m in range(n):
        P[m, m * r:(m + 1) * r, m * r:(m + 1) * r] = np.eye(r)
    return ProjectionPartition(P)


def universal_depth1(x: BlockMatrix) -> FactorizationCertificate:
    """Depth-1 certificate for any square x, with cost n * max_ij ||x_ij||.

    The entries of x are spread on a diagonal of size n**2 indexed
    row-major; the two scalar factors are 0/1 matrices depending only
    on n.
    """
    if x.m != x.n:
        raise ShapeMismatchError("input must be square")
    n, k = x.n, x.k
    N = n * n
    a0 = np.zeros((n, N), dtype=np.complex128)
    a1 = np.zeros((N, n), dtype=np.complex128)
    for i in range(n):
        for t in range(n):
            a0[i, i * n + t] = 1.0
            a1[t * n + i, i] = 1.0
    D = DiagonalMatrix(x.blocks.reshape(N, k, k))
    return FactorizationCertificate((a0, a1), (D,))


def is_block_diagonal(x: BlockMatrix) -> bool:
    off = x.blocks.copy()
    for i in range(min(x.m, x.n)):
        off[i, i] = 0
    return not np.any(off)


def diagonal_depth1(x: BlockMatrix) -> FactorizationCertificate:
    """Depth-1 certificate for a block-diagonal x with cost = max_i ||x_ii||."""
    if x.m != x.n:
        raise ShapeMismatchError("input must be square")
    if not is_block_diagonal(x):
        raise ShapeMismatchError("input is not block diagonal")
    n = x.n
    eye = np.eye(n, dtype=np.complex128)
    D = DiagonalMatrix(np.stack([x.entry(i, i) for i in range(n)]))
    return FactorizationCertificate((eye, eye), (D,))


def factor_through_family(
    x: BlockMatrix, fam: IsometryFamily, tol: float = 1e-10
) -> FactorizationCertificate:
    """Depth-3 certificate for the doubly-compressed matrix [p x_ij q].

    The outer diagonals carry the family rows a_i / d_j, the middle
    diagonal averages x against two constant-modulus unitaries, so each
    of its entries has norm at most ||x||.  Scalar factors are
    (identity, W, W, identity) with W the Fourier unitary of size n.
    """
    if x.m != x.n or x.n != fam.n or x.k != fam.k:
        raise ShapeMismatchError("matrix and family shapes disagree")
    fam.validate(tol)
    n, k = x.n, x.k
    W = fourier_unitary(n)
    eps1 = np.sqrt(n) * W.conj()          # eps1[i, k]
    eps2 = np.sqrt(n) * W.conj()          # eps2[k, j]
    t = np.einsum("iab,ijbc,jcd->ijad", fam.b, x.blocks, fam.c, optimize=True)
    D2 = np.einsum("ik,kj,ijad->kad", eps1, eps2, t, optimize=True)
    eye = np.eye(n, dtype=np.complex128)
    return FactorizationCertificate(
        (eye, W, W, eye),
        (DiagonalMatrix(fam.a.copy()), DiagonalMatrix(D2), DiagonalMatrix(fam.d.copy())),
    )


def _unit(n: int, r: int, c: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=np.complex128)
    e[r, c] = 1.0
    return e


def matrix_unit_family(base_order: int, n: int, r: int, s: int) -> IsometryFamily:
    """Matrix-unit family in M_n(B) for a corner (r, s), 1-based indices.

    p = q = e_rs (x) 1_B, a_i = e_ri (x) 1_B, b_j = e_js (x) 1_B and the
    same for c, d; all relations hold exactly and all norms are 1.
    """
    if not (1 <= r <= n and 1 <= s <= n):
        raise IndexError(f"corner indices ({r}, {s}) out of range for n={n}")
    eyeB = np.eye(base_order)
    p = np.kron(_unit(n, r - 1, s - 1), eyeB)
    a = np.stack([np.kron(_unit(n, r - 1, i), eyeB) for i in range(n)])
    b = np.stack([np.kron(_unit(n, j, s - 1), eyeB) for j in range(n)])
    return IsometryFamily(p=p, q=p.copy(), a=a, b=b, c=a.copy(), d=b.copy())


def projection_isometries(p: np.ndarray, n: int, tol: float = 1e-10) -> np.ndarray:
    """n partial isometries v_i with v_i* v_j = delta_ij p, sum v_i v_i* <= 1.

    Built from the spectral basis of p: the range basis is mapped onto n
    mutually orthogonal copies inside the same M_k, so n * rank(p) must
    not exceed k.  Deterministic for a fixed p.
    """
    p = np.asarray(p, dtype=np.complex128)
    k = p.shape[0]
    if np.abs(p @ p - p).max(initial=0.0) > tol or np.abs(p - p.conj().T).max() > tol:
        raise FamilyRelationError("input is not a projection")
    vals, vecs = np.linalg.eigh(p)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    # phase-normalize columns for a reproducible basis
    for j in range(k):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            vecs[:, j] = col / (col[nz[0]] / abs(col[nz[0]]))
    r = int(np.count_nonzero(vals > 0.5))
    if n * r > k:
        raise CapacityError(f"need {n}*{r} orthogonal directions in M_{k}")
    u = vecs[:, :r]
    out = np.zeros((n, k, k), dtype=np.complex128)
    for i in range(n):
        f = vecs[:, i * r:(i + 1) * r]
        out[i] = f @ u.conj().T
    return out


def family_from_projections(p: np.ndarray, q: np.ndarray, n: int) -> IsometryFamily:
    """Isometry family compressing to [p x q], from orthogonal copies of p and q."""
    v = projection_isometries(p, n)
    w = projection_isometries(q, n)
    return IsometryFamily(
        p=np.asarray(p, dtype=np.complex128),
        q=np.asarray(q, dtype=np.complex128),
        a=v.conj().transpose(0, 2, 1),
        b=v,
        c=w.conj().transpose(0, 2, 1),
        d=w,
    )


def corner_embedding_certificate(x: BlockMatrix, r: int, s: int) -> FactorizationCertificate:
    """Depth-3 certificate for [x_ij (x) e_rs] over M_n(B), cost <= ||x||.

    The entries are first lifted to x_ij (x) e_sr so that the corner
    compression of the matrix-unit family reproduces x_ij (x) e_rs; the
    lift has the same operator norm as x.
    """
    if x.m != x.n:
        raise ShapeMismatchError("input must be square")
    n, kB = x.n, x.k
    fam = matrix_unit_family(kB, n, r, s)
    esr = _unit(n, s - 1, r - 1)
    lifted = BlockMatrix(
        np.einsum("ab,ijcd->ijacbd", esr, x.blocks).reshape(n, n, n * kB, n * kB)
    )
    return factor_through_family(lifted, fam)


def partition_row_decomposition(part: ProjectionPartition) -> RowDecomposition:
    """The block row with entries delta_ij p_m, written as scalar * diagonal * scalar.

    The leading scalar is n**-0.5 [I ... I], the diagonal entries are
    Fourier-weighted sums of the partition projections (norm <= 1), and
    the trailing scalar is the inflated Fourier unitary; the product
    reproduces the row exactly and bounds its depth-1 cost by 1.
    """
    part.validate()
    n, k = part.n, part.k
    W = fourier_unitary(n)
    eyen = np.eye(n, dtype=np.complex128)
    alpha0 = np.hstack([eyen] * n) / np.sqrt(n)
    dvals = np.einsum("im,iab->mab", np.sqrt(n) * W.conj(), part.projections)
    entries = np.repeat(dvals, n, axis=0)  # entry at (m, j) is dvals[m]
    return RowDecomposition(alpha0, DiagonalMatrix(entries), np.kron(W, eyen))


def partition_block_row(part: ProjectionPartition) -> BlockMatrix:
    """The n x n**2 block row with entry delta_ij p_m at column (m, j)."""
    n, k = part.n, part.k
    blocks = np.zeros((n, n * n, k, k), dtype=np.complex128)
    for m in range(n):
        for i in range(n):
            blocks[i, m * n + i] = part.projections[m]
    return BlockMatrix(blocks)


def pinch_certificate(inner_certs, part: ProjectionPartition, tol: float = 1e-9):
    """Depth d+2 certificate for [sum_m p_m X_m(i, j) p_m].

    The inner certificates (one per partition element, each of cost at
    most 1) are direct-summed and conjugated by the partition row
    decomposition on both sides, so the total cost stays below the
    largest inner cost.
    """
    from .certs import cost as cert_cost

    inner_certs = list(inner_certs)
    n = part.n
    if len(inner_certs) != n:
        raise ShapeMismatchError("need one inner certificate per partition element")
    d = inner_certs[0].d
    for c in inner_certs:
        if c.d != d or c.n != n or c.k != part.k:
            raise ShapeMismatchError("inner certificates must share depth and shape")
        if cert_cost(c) > 1 + tol:
            raise ValueError("inner certificate cost exceeds 1")
    balanced = [rebalance_diags(c) for c in inner_certs]

    alphas = []
    for i in range(d + 1):
        out = np.zeros(
            (sum(c.alphas[i].shape[0] for c in balanced),
             sum(c.alphas[i].shape[1] for c in balanced)),
            dtype=np.complex128,
        )
        ro = co = 0
        for c in balanced:
            a = c.alphas[i]
            out[ro:ro + a.shape[0], co:co + a.shape[1]] = a
            ro += a.shape[0]
            co += a.shape[1]
        alphas.append(out)
    diags = tuple(
        DiagonalMatrix(np.concatenate([c.diags[i].entries for c in balanced]))
        for i in range(d)
    )
    dsum = FactorizationCertificate(tuple(alphas), diags)
    row = partition_row_decomposition(part)
    return conjugate(row, dsum, row)


def diagonal_embedding_certificate(x: BlockMatrix) -> FactorizationCertificate:
    """Depth-5 certificate for [x_ij (x) 1_n] over M_n(B), cost <= ||x||.

    Composes the corner embeddings at the n diagonal corners with the
    pinch by the diagonal matrix-unit partition of M_n(B).
    """
    if x.m != x.n:
        raise ShapeMismatchError("input must be square")
    n, kB = x.n, x.k
    nrm = operator_norm(x)
    xs = x * (1.0 / nrm) if nrm > 0 else x
    inners = [corner_embedding_certificate(xs, m, m) for m in range(1, n + 1)]
    part = ProjectionPartition(
        np.stack([np.kron(_unit(n, m, m), np.eye(kB)) for m in range(n)])
    )
    cert = pinch_certificate(inners, part)
    return cert.scaled(nrm) if nrm > 0 else cert


def pinch(x: BlockMatrix, part: ProjectionPartition) -> BlockMatrix:
    """Entrywise sum_m p_m x_ij p_m; contractive and idempotent."""
    if x.k != part.k:
        raise ShapeMismatchError("block order mismatch")
    P = part.projections
    return BlockMatrix(np.einsum("mab,ijbc,mcd->ijad", P, x.blocks, P, optimize=True))
