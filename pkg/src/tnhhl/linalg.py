"""Self-contained dense complex linear algebra.

Provides the primitives the solver stack is built on: complex matrix
products, a cyclic-Jacobi Hermitian eigendecomposition, the unitary
propagator exp(i*H*t), an LU direct solve with partial pivoting, and a
conjugate-gradient iteration for Hermitian positive-definite systems.
Everything operates on plain numpy complex128 arrays.
"""

from dataclasses import dataclass

import numpy as np

from . import validation
from .exceptions import ConvergenceError, DomainError, ShapeError, SingularMatrixError

# Hard ceiling on cyclic Jacobi sweeps before giving up.
MAX_JACOBI_SWEEPS = 100


@dataclass
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors holds the matching
    orthonormal eigenvectors as columns, so  h @ V == V @ diag(eigenvalues).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class CGResult:
    """Conjugate-gradient outcome: solution plus convergence diagnostics."""

    x: np.ndarray
    iterations: int
    converged: bool
    residual_rel: float


def matmul(a, b) -> np.ndarray:
    """Complex matrix product a @ b with shape checking."""
    a = validation.as_complex_matrix(a, "a")
    b = validation.as_complex_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"matmul dimension mismatch: a is {a.shape[0]}x{a.shape[1]}, "
            f"b is {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def vec_mat(v, a) -> np.ndarray:
    """Row-vector times matrix: result_k = sum_i v_i * a_ik."""
    v = validation.as_complex_vector(v, "v")
    a = validation.as_complex_matrix(a, "a")
    if v.shape[0] != a.shape[0]:
        raise ShapeError(
            f"vec_mat dimension mismatch: v has length {v.shape[0]}, "
            f"a is {a.shape[0]}x{a.shape[1]}"
        )
    return v @ a


def hermitian_eigen(h, tol: float = 1e-12) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pairs, annihilating each with a complex
    plane rotation, until every off-diagonal magnitude is at most
    tol * max|h|. Raises ConvergenceError if that has not happened after
    MAX_JACOBI_SWEEPS sweeps (in practice convergence is quadratic and a
    handful of sweeps suffice).
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    h = validation.check_hermitian(h, "h")
    n = h.shape[0]
    a = h.astype(np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)

    scale = np.max(np.abs(a))
    if scale == 0.0 or n == 1:
        return EigenDecomposition(np.real(np.diag(a)).copy(), v)

    thresh = tol * scale
    # Rotate on anything above a fraction of the target so a rotation-free
    # sweep certifies convergence.
    inner = 0.01 * thresh

    for _sweep in range(MAX_JACOBI_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= inner:
                    continue
                rotated = True
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / mag
                tau = (aqq - app) / (2.0 * mag)
                sgn = 1.0 if tau >= 0.0 else -1.0
                tt = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + tt * tt)
                s_ph = (tt * c) * phase

                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s_ph * rq
                a[q, :] = np.conj(s_ph) * rp + c * rq

                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp - np.conj(s_ph) * cq
                a[:, q] = s_ph * cp + c * cq

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - np.conj(s_ph) * vq
                v[:, q] = s_ph * vp + c * vq

                # The rotation annihilates this pair exactly; pin it to kill
                # rounding residue, and keep the diagonal real.
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        off = np.max(np.abs(a - np.diag(np.diag(a))))
        if off <= thresh or not rotated:
            break
    else:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {MAX_JACOBI_SWEEPS} sweeps: "
            f"max off-diagonal {off:.3e} > {thresh:.3e}"
        )

    d = np.real(np.diag(a)).copy()
    order = np.argsort(d, kind="stable")
    return EigenDecomposition(d[order], v[:, order])


def unitary_from_eigen(eig: EigenDecomposition, t: float) -> np.ndarray:
    """Assemble exp(i*h*t) from a precomputed eigendecomposition of h."""
    phases = np.exp(1j * eig.eigenvalues * t)
    return (eig.eigenvectors * phases) @ eig.eigenvectors.conj().T


def unitary_exp(h, t: float) -> np.ndarray:
    """Propagator U = exp(i*h*t) for Hermitian h, via eigendecomposition."""
    eig = hermitian_eigen(h, tol=1e-13)
    return unitary_from_eigen(eig, t)


def lu_solve(a, b) -> np.ndarray:
    """Solve a @ x = b by LU decomposition with partial (row) pivoting."""
    a = validation.check_square(a, "a")
    b = validation.as_complex_vector(b, "b")
    n = a.shape[0]
    if b.shape[0] != n:
        raise ShapeError(f"rhs length {b.shape[0]} does not match matrix size {n}")

    m = a.astype(np.complex128, copy=True)
    x = b.astype(np.complex128, copy=True)
    scale = np.max(np.abs(a))
    if scale == 0.0:
        raise SingularMatrixError("matrix is identically zero")
    pivot_floor = scale * n * 1e-15

    for k in range(n):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        if abs(m[piv, k]) <= pivot_floor:
            raise SingularMatrixError(
                f"matrix is singular to machine precision: pivot magnitude "
                f"{abs(m[piv, k]):.3e} in column {k}"
            )
        if piv != k:
            m[[k, piv], :] = m[[piv, k], :]
            x[[k, piv]] = x[[piv, k]]
        if k + 1 < n:
            m[k + 1:, k] /= m[k, k]
            m[k + 1:, k + 1:] -= np.outer(m[k + 1:, k], m[k, k + 1:])
            x[k + 1:] -= m[k + 1:, k] * x[k]

    for k in range(n - 1, -1, -1):
        if k + 1 < n:
            x[k] -= m[k, k + 1:] @ x[k + 1:]
        x[k] /= m[k, k]
    return x


def conjugate_gradient(a, b, tol: float = 1e-10, max_iter: int | None = None) -> CGResult:
    """Conjugate gradient for Hermitian positive-definite systems.

    Iterates until the relative residual ||a x - b|| / ||b|| drops below
    tol or max_iter (default 10 n) is exhausted; the result carries the
    iteration count and convergence flag. Detects an indefinite matrix
    through negative direction curvature and raises DomainError.
    """
    a = validation.check_hermitian(a, "a")
    b = validation.as_complex_vector(b, "b")
    n = a.shape[0]
    if b.shape[0] != n:
        raise ShapeError(f"rhs length {b.shape[0]} does not match matrix size {n}")
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if max_iter is None:
        max_iter = 10 * n

    b_norm = np.linalg.norm(b)
    x = np.zeros(n, dtype=np.complex128)
    if b_norm == 0.0:
        return CGResult(x, 0, True, 0.0)

    r = b.copy()
    p = r.copy()
    rs = np.vdot(r, r).real
    res = 1.0
    iterations = 0
    for _ in range(max_iter):
        ap = a @ p
        curv = np.vdot(p, ap).real
        if curv <= 0.0:
            raise DomainError(
                f"matrix is not positive definite: direction curvature {curv:.3e}"
            )
        alpha = rs / curv
        x += alpha * p
        r -= alpha * ap
        iterations += 1
        res = np.linalg.norm(r) / b_norm
        if res <= tol:
            return CGResult(x, iterations, True, float(res))
        rs_new = np.vdot(r, r).real
        p = r + (rs_new / rs) * p
        rs = rs_new
    return CGResult(x, iterations, False, float(res))
