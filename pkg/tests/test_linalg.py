"""Dense linear algebra kernels against independent oracles.

matmul is checked against an explicit triple loop, the Jacobi
eigendecomposition against reconstruction/orthonormality/trace identities
and a closed-form 2x2 case, the matrix exponential against a truncated
Taylor series, and the solvers against residuals and each other.
"""

import numpy as np
import pytest

from tnhhl.exceptions import ConvergenceError, DomainError, ShapeError, SingularMatrixError
from tnhhl.linalg import (
    CGResult,
    conjugate_gradient,
    hermitian_eigen,
    lu_solve,
    matmul,
    unitary_exp,
    unitary_from_eigen,
    vec_mat,
)
from tests.conftest import crandn, random_hermitian


def matmul_oracle(a, b):
    """Triple-loop reference product."""
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.complex128)
    for i in range(a.shape[0]):
        for k in range(b.shape[1]):
            acc = 0.0 + 0.0j
            for j in range(a.shape[1]):
                acc += a[i, j] * b[j, k]
            out[i, k] = acc
    return out


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 3, 4), (5, 5, 5), (4, 1, 3)])
def test_matmul_matches_triple_loop(shape, rng):
    p, q, r = shape
    a = crandn((p, q), rng)
    b = crandn((q, r), rng)
    assert np.allclose(matmul(a, b), matmul_oracle(a, b), atol=1e-13)


def test_matmul_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        matmul(crandn((2, 3), rng), crandn((2, 3), rng))


def test_vec_mat_is_row_vector_product(rng):
    v = crandn(3, rng)
    a = crandn((3, 4), rng)
    expected = np.array([np.sum(v * a[:, k]) for k in range(4)])
    assert np.allclose(vec_mat(v, a), expected, atol=1e-13)
    with pytest.raises(ShapeError):
        vec_mat(crandn(2, rng), a)


# ---------------------------------------------------------------------------
# Jacobi eigendecomposition
# ---------------------------------------------------------------------------

def test_eigen_2x2_closed_form():
    # [[a, b], [conj(b), c]] has eigenvalues (a+c)/2 +- sqrt(((a-c)/2)^2+|b|^2)
    a, c = 1.0, 3.0
    b = 0.5 - 0.25j
    h = np.array([[a, b], [np.conj(b), c]])
    mid = (a + c) / 2
    rad = np.sqrt(((a - c) / 2) ** 2 + abs(b) ** 2)
    eig = hermitian_eigen(h)
    assert np.allclose(eig.eigenvalues, [mid - rad, mid + rad], atol=1e-13)


def test_eigen_diagonal_matrix_is_exact():
    d = np.diag([3.0, -1.0, 2.0]).astype(np.complex128)
    eig = hermitian_eigen(d)
    assert np.allclose(eig.eigenvalues, [-1.0, 2.0, 3.0])
    # Columns must be permuted canonical basis vectors.
    assert np.allclose(np.abs(eig.eigenvectors), np.eye(3)[:, [1, 2, 0]])


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17])
def test_eigen_reconstruction_and_orthonormality(n, rng):
    h = random_hermitian(n, rng)
    eig = hermitian_eigen(h)
    v = eig.eigenvectors
    lam = eig.eigenvalues
    assert lam.dtype == np.float64
    assert np.all(np.diff(lam) >= 0), "eigenvalues must come out ascending"
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-11)
    assert np.allclose((v * lam) @ v.conj().T, h, atol=1e-11 * max(1.0, np.max(np.abs(h))))
    assert np.isclose(np.sum(lam), np.trace(h).real, atol=1e-10)


def test_eigen_degenerate_spectrum(rng):
    # A projector has eigenvalues {0, 1} with multiplicity; reconstruction
    # must still hold even though eigenvectors are not unique.
    g = crandn((4, 2), rng)
    q, _ = np.linalg.qr(g)
    h = q @ q.conj().T
    eig = hermitian_eigen(h)
    assert np.allclose(np.sort(eig.eigenvalues), [0, 0, 1, 1], atol=1e-11)
    v = eig.eigenvectors
    assert np.allclose((v * eig.eigenvalues) @ v.conj().T, h, atol=1e-11)


def test_eigen_rejects_non_hermitian(rng):
    with pytest.raises(DomainError):
        hermitian_eigen(crandn((3, 3), rng))


# ---------------------------------------------------------------------------
# Matrix exponential / propagator
# ---------------------------------------------------------------------------

def taylor_exp_ih_t(h, t, terms=60):
    """Truncated series for exp(i t h); accurate when ||t h|| is small."""
    n = h.shape[0]
    out = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, terms):
        term = term @ (1j * t * h) / k
        out = out + term
    return out


@pytest.mark.parametrize("n", [1, 2, 4])
def test_unitary_exp_matches_taylor_series(n, rng):
    h = random_hermitian(n, rng)
    u = unitary_exp(h, 0.3)
    assert np.allclose(u, taylor_exp_ih_t(h, 0.3), atol=1e-12)


def test_unitary_exp_is_unitary_and_additive(rng):
    h = random_hermitian(5, rng, scale=2.0)
    u1 = unitary_exp(h, 0.7)
    u2 = unitary_exp(h, 1.1)
    u12 = unitary_exp(h, 1.8)
    assert np.allclose(u1.conj().T @ u1, np.eye(5), atol=1e-12)
    assert np.allclose(u1 @ u2, u12, atol=1e-11)


def test_unitary_exp_round_trip(rng):
    # U(t) @ U(-t) == I: the round-trip identity.
    h = random_hermitian(6, rng)
    u = unitary_exp(h, 1.3)
    assert np.allclose(u @ unitary_exp(h, -1.3), np.eye(6), atol=1e-12)


def test_unitary_from_eigen_matches_unitary_exp(rng):
    h = random_hermitian(4, rng)
    eig = hermitian_eigen(h)
    assert np.allclose(unitary_from_eigen(eig, 0.9), unitary_exp(h, 0.9), atol=1e-12)


# ---------------------------------------------------------------------------
# LU with partial pivoting
# ---------------------------------------------------------------------------

def test_lu_solve_known_2x2():
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    b = np.array([5.0, 10.0])
    # By hand: x = (1, 3).
    assert np.allclose(lu_solve(a, b), [1.0, 3.0], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 48])
def test_lu_solve_residual(n, rng):
    a = crandn((n, n), rng)
    b = crandn(n, rng)
    x = lu_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-11 * np.linalg.norm(b)


def test_lu_solve_needs_pivoting():
    # Zero leading pivot is fine as long as the matrix is invertible.
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(lu_solve(a, np.array([3.0, 4.0])), [4.0, 3.0])


def test_lu_solve_singular_raises():
    with pytest.raises(SingularMatrixError):
        lu_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((3, 3)) + np.eye(3) * 0.0, np.ones(3))


def test_lu_solve_shape_errors(rng):
    with pytest.raises(ShapeError):
        lu_solve(crandn((2, 3), rng), crandn(2, rng))
    with pytest.raises(ShapeError):
        lu_solve(crandn((3, 3), rng), crandn(2, rng))


# ---------------------------------------------------------------------------
# Conjugate gradient
# ---------------------------------------------------------------------------

def test_cg_identity_converges_first_iteration():
    b = np.array([1.0, -2.0, 3.0], dtype=np.complex128)
    res = conjugate_gradient(np.eye(3), b)
    assert isinstance(res, CGResult)
    assert res.converged
    assert res.iterations == 1
    assert np.allclose(res.x, b)


def test_cg_diagonal_system():
    a = np.diag([1.0, 2.0, 4.0, 8.0])
    b = np.array([1.0, 1.0, 1.0, 1.0])
    res = conjugate_gradient(a, b)
    assert res.converged
    assert np.allclose(res.x, 1.0 / np.diag(a), atol=1e-10)
    assert res.residual_rel <= 1e-10


@pytest.mark.parametrize("n", [4, 16, 64])
def test_cg_matches_lu_on_hpd(n, rng):
    g = crandn((n, n), rng)
    a = g @ g.conj().T + n * np.eye(n)  # well-conditioned HPD
    b = crandn(n, rng)
    res = conjugate_gradient(a, b, tol=1e-12)
    x_lu = lu_solve(a, b)
    assert res.converged
    assert np.linalg.norm(res.x - x_lu) <= 1e-7 * np.linalg.norm(x_lu)


def test_cg_laplacian_vs_lu():
    # Negated second-difference matrix: HPD, the classic CG testbed.
    n = 32
    a = 2.0 * np.eye(n)
    idx = np.arange(n - 1)
    a[idx, idx + 1] = -1.0
    a[idx + 1, idx] = -1.0
    b = np.sin(np.linspace(0.1, 3.0, n))
    res = conjugate_gradient(a, b, tol=1e-13)
    assert np.allclose(res.x, lu_solve(a, b), atol=1e-9)


def test_cg_rejects_non_hermitian(rng):
    with pytest.raises(DomainError):
        conjugate_gradient(crandn((3, 3), rng), crandn(3, rng))


def test_cg_rejects_indefinite():
    # Hermitian but with a negative eigenvalue: curvature goes non-positive.
    a = np.diag([1.0, -1.0])
    with pytest.raises(DomainError):
        conjugate_gradient(a, np.array([1.0, 1.0]))


def test_cg_zero_rhs_short_circuits():
    res = conjugate_gradient(np.eye(3), np.zeros(3))
    assert res.converged
    assert res.iterations == 0
    assert np.all(res.x == 0)
