"""Deterministic seeded generation of random block-matrix instances."""

from __future__ import annotations

import numpy as np

from .blocks import BlockMatrix
from .constructions import diagonal_partition, pinch

__all__ = ["random_instance", "DISTRIBUTIONS"]

DISTRIBUTIONS = ("gaussian", "haar", "blockdiag")


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _haar_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    z = _complex_gaussian(rng, (k, k))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_instance(
    n: int,
    k: int,
    seed: int,
    distribution: str = "gaussian",
    noise: float = 0.1,
    scale: float = 1.0,
) -> BlockMatrix:
    """An n x n instance over M_k, deterministic for a fixed seed.

    ``gaussian``: iid standard complex normal entries (times ``scale``).
    ``haar``: independent Haar-distributed unitary blocks.
    ``blockdiag``: pinch-invariant base for the diagonal partition of
    M_k into n blocks, plus ``noise`` times a Gaussian perturbation
    (requires n | k; ``noise=0`` gives an exactly pinch-invariant
    instance).
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    rng = np.random.default_rng([seed, n, k])
    if distribution == "gaussian":
        return BlockMatrix(scale * _complex_gaussian(rng, (n, n, k, k)))
    if distribution == "haar":
        blocks = np.stack(
            [[_haar_unitary(rng, k) for _ in range(n)] for _ in range(n)]
        )
        return BlockMatrix(scale * blocks)
    if distribution == "blockdiag":
        part = diagonal_partition(n, k)
        base = pinch(BlockMatrix(_complex_gaussian(rng, (n, n, k, k))), part)
        if noise == 0:
            return scale * base
        bump = BlockMatrix(_complex_gaussian(rng, (n, n, k, k)))
        return scale * (base + noise * bump)
    raise ValueError(f"unknown distribution {distribution!r}")
