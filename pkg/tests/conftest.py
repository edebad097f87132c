import numpy as np
import pytest

from oplength import BlockMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_block(rng, m, n, k):
    z = rng.standard_normal((m, n, k, k)) + 1j * rng.standard_normal((m, n, k, k))
    return BlockMatrix(z / np.sqrt(2))


def random_hermitian(rng, k):
    z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return (z + z.conj().T) / 2
