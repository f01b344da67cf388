import numpy as np
import pytest

from corrdist.linalg import jacobi_eigh


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, rank=4):
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def jacobi_spectrum(h):
    """Eigenvalues via the in-house Jacobi solver (independent of LAPACK)."""
    return jacobi_eigh(h)[0]
