"""Shared helpers for the test suite.

Random objects are built from seeded generators so every test is
reproducible; grid-aligned Hermitian matrices (all eigenvalues exactly of
the form 2 pi c / (t m) for integer bins c) are the main exact fixture,
because phase estimation resolves them without discretization error and
the solver must then agree with direct elimination to near machine
precision.
"""

import numpy as np
import pytest

from tnhhl.linalg import hermitian_eigen, unitary_from_eigen


def crandn(shape, rng):
    """Standard complex normal samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hermitian(n, rng, scale=1.0):
    g = crandn((n, n), rng)
    return scale * (g + g.conj().T) / 2


def random_unitary(n, rng, t=1.0):
    """Unitary via the propagator of a random Hermitian matrix."""
    h = random_hermitian(n, rng)
    eig = hermitian_eigen(h)
    return unitary_from_eigen(eig, t)


def grid_aligned_hermitian(n, m, t, rng, bins=None):
    """Hermitian matrix whose spectrum sits exactly on clock bins.

    Eigenvalues are 2 pi c / (t m) for the given integer bins (distinct,
    nonzero, taken from (-m/2, m/2]); eigenvectors come from a random
    unitary. Returns (matrix, eigenvalues).
    """
    if bins is None:
        half = m // 2
        pool = np.concatenate([np.arange(1, half + 1), np.arange(-half + 1, 0)])
        bins = rng.choice(pool, size=n, replace=False)
    bins = np.asarray(bins)
    lam = 2.0 * np.pi * bins / (t * m)
    q = random_unitary(n, rng)
    h = (q * lam) @ q.conj().T
    return (h + h.conj().T) / 2, lam


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
