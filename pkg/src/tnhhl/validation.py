"""Input validation helpers shared across the package.

Every public entry point funnels its array arguments through these checks so
that error messages are uniform and the numerical code can assume clean
complex128 arrays.
"""

import numpy as np

from .exceptions import DomainError, ShapeError

# Relative tolerance used when checking that a matrix is Hermitian.
HERMITIAN_RTOL = 1e-12

# Tolerance used when checking that a propagator is unitary.
UNITARY_TOL = 1e-10


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce `a` to a 2-D complex128 ndarray, rejecting NaN/Inf entries."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"{name} must be non-empty, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise DomainError(f"{name} contains non-finite entries")
    return a


def as_complex_vector(v, name: str = "vector") -> np.ndarray:
    """Coerce `v` to a 1-D complex128 ndarray, rejecting NaN/Inf entries."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got ndim={v.ndim}")
    if v.size < 1:
        raise ShapeError(f"{name} must be non-empty")
    if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
        raise DomainError(f"{name} contains non-finite entries")
    return v


def check_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Require a square 2-D array."""
    a = as_complex_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    return a


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    """True when ``a`` equals its conjugate transpose within `rtol` times the
    largest entry magnitude."""
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        return True
    return np.max(np.abs(a - a.conj().T)) <= rtol * scale


def check_hermitian(a, name: str = "matrix", rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate that `a` is square and Hermitian; return the clean array."""
    a = check_square(a, name)
    if not is_hermitian(a, rtol):
        dev = np.max(np.abs(a - a.conj().T))
        raise DomainError(
            f"{name} must be Hermitian: max |a - a^H| = {dev:.3e} exceeds "
            f"tolerance {rtol:.1e} * max|a|"
        )
    return a


def check_unitary(u, name: str = "matrix", tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate that `u` is square and unitary within `tol`."""
    u = check_square(u, name)
    n = u.shape[0]
    dev = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if dev > tol:
        raise DomainError(
            f"{name} must be unitary: max |u^H u - I| = {dev:.3e} exceeds {tol:.1e}"
        )
    return u


def check_clock(m: int, t: float | None = None) -> None:
    """Validate clock-register parameters: integer m >= 2 and, when given,
    a strictly positive evolution time t."""
    if int(m) != m or m < 2:
        raise DomainError(f"clock dimension m must be an integer >= 2, got {m!r}")
    if t is not None:
        if not np.isfinite(t) or t <= 0:
            raise DomainError(f"evolution time t must be positive and finite, got {t!r}")
