"""Tensor builders and contraction paths for the tensor-network HHL solver.

The network is the HHL circuit written as tensors: unnormalized clock
Fourier matrices, a diagonal signed-bin eigenvalue inverter, phase-kickback
tensors holding powers of the propagator U, and the W family of propagated
right-hand sides. Two contraction paths are provided — a naive one that
contracts the full network and an efficient one that precontracts the clock
tensors into a spectral kernel — and they agree to near machine precision.

Throughout, clock bin c stands for phase 2*pi*c/m; bins above m/2 represent
negative eigenvalues through the periodicity of the imaginary exponential.
"""

from dataclasses import dataclass

import numpy as np

from . import validation
from .exceptions import DomainError, ShapeError


def build_fourier(m: int) -> np.ndarray:
    """Unnormalized m x m Fourier matrix, entry (a, b) = exp(2i pi a b / m)."""
    validation.check_clock(m)
    ab = np.outer(np.arange(m), np.arange(m))
    return np.exp(2j * np.pi * ab / m)


def build_inverse_fourier(m: int) -> np.ndarray:
    """Conjugate-phase Fourier matrix, entry (a, b) = exp(-2i pi a b / m).

    Also unnormalized, so build_fourier(m) @ build_inverse_fourier(m) equals
    m * I rather than I; the output scale calibration absorbs the powers
    of m this convention introduces.
    """
    validation.check_clock(m)
    ab = np.outer(np.arange(m), np.arange(m))
    return np.exp(-2j * np.pi * ab / m)


def inverter_diagonal(m: int, pos_fraction: float = 0.5) -> np.ndarray:
    """Diagonal of the eigenvalue inverter as a real vector.

    Entry 0 is 0 (the zero-phase bin is projected out: eigenvalue 0 has no
    inverse), entry c is 1/c for 1 <= c <= floor(m * pos_fraction), and
    1/(c - m) above that boundary, interpreting high bins as negative
    eigenvalues. pos_fraction moves the positive/negative boundary; the
    default splits the range in half.
    """
    validation.check_clock(m)
    if not 0.0 < pos_fraction <= 1.0:
        raise DomainError(f"pos_fraction must be in (0, 1], got {pos_fraction}")
    boundary = int(np.floor(m * pos_fraction))
    c = np.arange(m, dtype=np.float64)
    signed = np.where(c <= boundary, c, c - m)
    diag = np.zeros(m, dtype=np.float64)
    diag[1:] = 1.0 / signed[1:]
    return diag


def build_inverter(m: int, pos_fraction: float = 0.5) -> np.ndarray:
    """Eigenvalue inverter as a diagonal m x m matrix."""
    return np.diag(inverter_diagonal(m, pos_fraction)).astype(np.complex128)


def build_phase_kickback(u, m: int, inverse: bool = False) -> np.ndarray:
    """Rank-3 phase-kickback tensor of shape (N, m, N).

    Forward: slice j is U^j. Inverse: slice j is the transpose of U^(-j),
    i.e. entry (a, j, c) = (U^(-j))[c, a]. Built by one matrix
    multiplication per clock increment.
    """
    u = validation.check_unitary(u, "u")
    validation.check_clock(m)
    n = u.shape[0]
    step = u.conj().T if inverse else u
    p = np.empty((n, m, n), dtype=np.complex128)
    cur = np.eye(n, dtype=np.complex128)
    for j in range(m):
        p[:, j, :] = cur.T if inverse else cur
        if j + 1 < m:
            cur = step @ cur
    return p


@dataclass
class WTensor:
    """The propagated right-hand-side family W[a, b, :] = U^(a-b) @ b.

    Because the tensor depends on the clock indices only through their
    difference, it is stored as the chain of 2m-1 vectors
    chain[m-1+p] = U^p @ b for p in [-(m-1), m-1] instead of a dense
    (m, m, N) block; `dense` materializes the full tensor when needed.
    """

    m: int
    chain: np.ndarray

    @property
    def n(self) -> int:
        return self.chain.shape[1]

    def vector(self, p: int) -> np.ndarray:
        """The chain vector U^p @ b for p in [-(m-1), m-1]."""
        if not -(self.m - 1) <= p <= self.m - 1:
            raise ShapeError(f"power {p} outside chain range for m={self.m}")
        return self.chain[self.m - 1 + p]

    def dense(self) -> np.ndarray:
        """Materialize the full (m, m, N) tensor."""
        a = np.arange(self.m)
        diff = a[:, None] - a[None, :] + (self.m - 1)
        return self.chain[diff]


def build_w(b, u, m: int) -> WTensor:
    """Build the W tensor for right-hand side b and unitary propagator u.

    Iterates v_{p+1} = U @ v_p and v_{p-1} = U^H @ v_p from v_0 = b, so the
    cost is O(N^2 m) and no explicit matrix power is ever formed.
    """
    u = validation.check_unitary(u, "u")
    b = validation.as_complex_vector(b, "b")
    validation.check_clock(m)
    n = u.shape[0]
    if b.shape[0] != n:
        raise ShapeError(f"b has length {b.shape[0]} but u is {n}x{n}")
    chain = np.empty((2 * m - 1, n), dtype=np.complex128)
    chain[m - 1] = b
    u_back = u.conj().T
    for p in range(1, m):
        chain[m - 1 + p] = u @ chain[m - 2 + p]
        chain[m - 1 - p] = u_back @ chain[m - p]
    return WTensor(m=m, chain=chain)


@dataclass
class SpectralKernel:
    """Precontracted clock kernel K = H^(-1) . inv . H and its diagonal sums.

    K[a, b] depends only on (a - b) mod m, so the whole matrix is generated
    from the m-vector kappa[p] = sum_d inv_d exp(-2i pi d p / m).
    diagonal_weights[m-1+p] holds c_p = sum over the (m - |p|) entries of K
    with a - b = p, which equals (m - |p|) * kappa[p mod m]. The efficient
    contraction consumes only these weights.
    """

    m: int
    k: np.ndarray
    diagonal_weights: np.ndarray

    @classmethod
    def build(cls, m: int, pos_fraction: float = 0.5) -> "SpectralKernel":
        validation.check_clock(m)
        inv_diag = inverter_diagonal(m, pos_fraction)
        kappa = build_inverse_fourier(m) @ inv_diag.astype(np.complex128)
        a = np.arange(m)
        k = kappa[(a[:, None] - a[None, :]) % m]
        p = np.arange(-(m - 1), m)
        weights = (m - np.abs(p)) * kappa[p % m]
        return cls(m=m, k=k, diagonal_weights=weights)


def contract_naive(b, u, m: int, pos_fraction: float = 0.5) -> np.ndarray:
    """Contract the full network without precontracting the clock tensors.

    Builds both phase-kickback tensors and the Fourier/inverter matrices and
    sums all indices in one einsum. Unscaled: the caller applies the
    calibrated output scale. Cost grows like O(N^2 m^2), so this path is the
    cross-check, not the production route.
    """
    b = validation.as_complex_vector(b, "b")
    validation.check_clock(m)
    p_fwd = build_phase_kickback(u, m, inverse=False)
    p_inv = build_phase_kickback(u, m, inverse=True)
    h = build_fourier(m)
    h_inv = build_inverse_fourier(m)
    inverter = build_inverter(m, pos_fraction)
    if b.shape[0] != p_fwd.shape[0]:
        raise ShapeError(f"b has length {b.shape[0]} but u is {p_fwd.shape[0]}x{p_fwd.shape[0]}")
    return np.einsum(
        "q,abq,bd,de,ef,afi->i",
        b, p_fwd, h_inv, inverter, h, p_inv,
        optimize=True,
    )


def contract_efficient(w, kernel: SpectralKernel) -> np.ndarray:
    """Contract a W tensor against the spectral kernel.

    For a chain-form WTensor this is the diagonal-weight rewrite
    r_i = sum_p c_p (U^p b)_i, an exact algebraic identity with the double
    sum r_i = sum_{a,b} W[a,b,i] K[a,b], costing O(N m) after the chain is
    built. A dense (m, m, N) ndarray is accepted too and contracted
    literally against K.
    """
    if isinstance(w, WTensor):
        if w.m != kernel.m:
            raise ShapeError(f"W tensor has m={w.m} but kernel has m={kernel.m}")
        return kernel.diagonal_weights @ w.chain
    w = np.asarray(w, dtype=np.complex128)
    if w.ndim != 3 or w.shape[0] != kernel.m or w.shape[1] != kernel.m:
        raise ShapeError(
            f"dense W must have shape (m, m, N) with m={kernel.m}, got {w.shape}"
        )
    return np.einsum("ab,abi->i", kernel.k, w, optimize=True)
