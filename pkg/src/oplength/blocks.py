"""Block-matrix arithmetic over the matrix algebras M_k.

Elements of the base algebra are plain ``(k, k)`` complex ndarrays.  A
:class:`BlockMatrix` is an ``m x n`` array of such blocks; its value is
entirely determined by the inflated ``(m*k, n*k)`` complex matrix, the
block bookkeeping only records how it is partitioned.  Scalar matrices
act on block matrices by inflation, i.e. tensoring with the identity of
the base algebra, which leaves their operator norm unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BlockMatrix",
    "DiagonalMatrix",
    "ShapeMismatchError",
    "HermitianError",
    "inflate",
    "scalar_norm",
    "operator_norm",
    "hermitian_spectral",
    "spectral_projection",
    "normalized_trace",
    "block_l2",
    "fourier_unitary",
    "psd_sqrt",
]


class ShapeMismatchError(ValueError):
    """Block shapes or orders do not chain."""


class HermitianError(ValueError):
    """Input expected to be Hermitian is not."""


def _as_blocks(blocks) -> np.ndarray:
    b = np.array(blocks, dtype=np.complex128)
    if b.ndim != 4 or b.shape[2] != b.shape[3]:
        raise ShapeMismatchError(f"expected (m, n, k, k) blocks, got {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("non-finite entries")
    return b


@dataclass(frozen=True)
class BlockMatrix:
    """An m x n matrix of k x k complex blocks.

    Immutable; all operations return new values.
    """

    blocks: np.ndarray  # shape (m, n, k, k)

    def __post_init__(self):
        object.__setattr__(self, "blocks", _as_blocks(self.blocks))
        self.blocks.setflags(write=False)

    @property
    def m(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[1]

    @property
    def k(self) -> int:
        return self.blocks.shape[2]

    @classmethod
    def from_dense(cls, dense: np.ndarray, k: int) -> "BlockMatrix":
        dense = np.asarray(dense, dtype=np.complex128)
        if dense.shape[0] % k or dense.shape[1] % k:
            raise ShapeMismatchError(f"dense shape {dense.shape} not divisible by k={k}")
        m, n = dense.shape[0] // k, dense.shape[1] // k
        blocks = dense.reshape(m, k, n, k).transpose(0, 2, 1, 3)
        return cls(blocks)

    @classmethod
    def zeros(cls, m: int, n: int, k: int) -> "BlockMatrix":
        return cls(np.zeros((m, n, k, k), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int, k: int) -> "BlockMatrix":
        return cls.from_dense(np.eye(n * k, dtype=np.complex128), k)

    def dense(self) -> np.ndarray:
        """The inflated (m*k, n*k) complex matrix."""
        m, n, k, _ = self.blocks.shape
        return self.blocks.transpose(0, 2, 1, 3).reshape(m * k, n * k)

    def entry(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def adjoint(self) -> "BlockMatrix":
        return BlockMatrix(self.blocks.conj().transpose(1, 0, 3, 2))

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(self.blocks + other.blocks)

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(self.blocks - other.blocks)

    def __mul__(self, c: complex) -> "BlockMatrix":
        return BlockMatrix(self.blocks * c)

    __rmul__ = __mul__

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.n != other.m or self.k != other.k:
            raise ShapeMismatchError("block shapes do not chain")
        return BlockMatrix(np.einsum("ipab,pjbc->ijac", self.blocks, other.blocks))


@dataclass(frozen=True)
class DiagonalMatrix:
    """A block-diagonal matrix in M_N(M_k): N diagonal entries in M_k.

    The operator norm equals the maximum entry norm.
    """

    entries: np.ndarray  # shape (N, k, k)

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128)
        if e.ndim != 3 or e.shape[1] != e.shape[2]:
            raise ShapeMismatchError(f"expected (N, k, k) entries, got {e.shape}")
        object.__setattr__(self, "entries", e)
        self.entries.setflags(write=False)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def unit(cls, size: int, k: int) -> "DiagonalMatrix":
        return cls(np.broadcast_to(np.eye(k, dtype=np.complex128), (size, k, k)).copy())

    def norm(self) -> float:
        if self.size == 0:
            return 0.0
        return float(max(np.linalg.norm(e, 2) for e in self.entries))

    def adjoint(self) -> "DiagonalMatrix":
        return DiagonalMatrix(self.entries.conj().transpose(0, 2, 1))

    def scaled(self, c: complex) -> "DiagonalMatrix":
        return DiagonalMatrix(self.entries * c)

    def dense(self) -> np.ndarray:
        N, k, _ = self.entries.shape
        out = np.zeros((N * k, N * k), dtype=np.complex128)
        for i in range(N):
            out[i * k:(i + 1) * k, i * k:(i + 1) * k] = self.entries[i]
        return out


def inflate(alpha: np.ndarray, k: int) -> np.ndarray:
    """Tensor a scalar matrix with the identity of M_k."""
    return np.kron(np.asarray(alpha, dtype=np.complex128), np.eye(k))


def scalar_norm(alpha: np.ndarray) -> float:
    a = np.asarray(alpha, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def operator_norm(x) -> float:
    """Largest singular value of x (BlockMatrix or plain ndarray)."""
    d = x.dense() if isinstance(x, BlockMatrix) else np.asarray(x, dtype=np.complex128)
    if not np.all(np.isfinite(d)):
        raise ValueError("non-finite entries")
    if d.size == 0:
        return 0.0
    return float(np.linalg.norm(d, 2))


def _check_hermitian(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    scale = max(1.0, float(np.abs(a).max())) if a.size else 1.0
    if np.abs(a - a.conj().T).max(initial=0.0) > tol * scale:
        raise HermitianError("input is not Hermitian within tolerance")
    return a


def _phase_normalize(vecs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Make the first nonzero component of each column real positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            ph = col[nz[0]] / abs(col[nz[0]])
            out[:, j] = col / ph
    return out


def hermitian_spectral(a: np.ndarray, group_tol: float = 1e-12):
    """Eigendecomposition of a Hermitian element as (eigenvalue, projection) pairs.

    Eigenvalues are returned in descending order; near-equal eigenvalues
    (within ``group_tol`` times the spectral scale) are merged into a
    single spectral projection.  The projections are Hermitian
    idempotents summing to the identity and ``sum l_i P_i`` reconstructs
    the input.
    """
    a = _check_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    vals, vecs = vals[::-1], _phase_normalize(vecs[:, ::-1])
    scale = max(1.0, float(np.abs(vals).max())) if vals.size else 1.0
    pairs = []
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[i] - vals[j] <= group_tol * scale:
            j += 1
        V = vecs[:, i:j]
        pairs.append((float(vals[i:j].mean()), V @ V.conj().T))
        i = j
    return pairs


def spectral_projection(a: np.ndarray, t: float, edge_tol: float = 1e-12) -> np.ndarray:
    """Projection onto the eigenspaces of a with eigenvalue >= t.

    The threshold is closed: eigenvalues equal to t up to ``edge_tol``
    are included.
    """
    a = _check_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    keep = vals >= t - edge_tol
    V = vecs[:, keep]
    return V @ V.conj().T


def normalized_trace(x: np.ndarray) -> complex:
    """Trace divided by the order, so the identity has trace 1."""
    x = np.asarray(x, dtype=np.complex128)
    return complex(np.trace(x) / x.shape[0])


def block_l2(x: BlockMatrix) -> float:
    """L2 mass (sum_ij tau(x_ij* x_ij))**0.5 over the normalized trace."""
    return float(np.linalg.norm(x.blocks) / np.sqrt(x.k))


def fourier_unitary(n: int) -> np.ndarray:
    """The n x n discrete Fourier unitary; every entry has modulus n**-0.5."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    idx = np.arange(n)
    return np.exp(2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD element, negative eigenvalues clipped at 0."""
    a = _check_hermitian(a)
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
