"""tnhhl: a tensor-network formulation of the HHL linear-system solver.

The package contracts the HHL quantum circuit classically as a tensor
network, applying the non-unitary eigenvalue inverter directly instead of
post-selecting, and cross-validates the contraction against an exact qudit
statevector simulation of the same circuit. It ships classical reference
solvers (LU, CG), finite-difference problem builders, a benchmark harness,
and a command-line interface.
"""

from .bench import RunRecord, SweepSpec, emit_results, read_records, rmse, run_experiment, run_sweep
from .circuit import (
    CircuitReport,
    QuditState,
    apply_clock_fourier,
    apply_conditional_rotation,
    apply_controlled_powers,
    init_state,
    postselect_ancilla_one,
    simulate_full,
)
from .exceptions import (
    CalibrationError,
    ConvergenceError,
    DomainError,
    ParseError,
    PostSelectionError,
    ShapeError,
    SingularMatrixError,
    StateError,
    TnhhlError,
)
from .linalg import (
    CGResult,
    EigenDecomposition,
    conjugate_gradient,
    hermitian_eigen,
    lu_solve,
    matmul,
    unitary_exp,
    vec_mat,
)
from .problems import (
    HermitizedProblem,
    LinearProblem,
    build_damped_oscillator,
    build_forced_oscillator,
    build_heat2d,
    extract_solution,
    hermitize,
)
from .solver import (
    ClockParams,
    TNSolveReport,
    TensorNetworkHHL,
    calibrate_scale,
    choose_time,
    invert_matrix,
    solve,
)
from .tensors import (
    SpectralKernel,
    WTensor,
    build_fourier,
    build_inverse_fourier,
    build_inverter,
    build_phase_kickback,
    build_w,
    contract_efficient,
    contract_naive,
)

__version__ = "0.1.0"

__all__ = [
    "CGResult",
    "CalibrationError",
    "CircuitReport",
    "ClockParams",
    "ConvergenceError",
    "DomainError",
    "EigenDecomposition",
    "HermitizedProblem",
    "LinearProblem",
    "ParseError",
    "PostSelectionError",
    "QuditState",
    "RunRecord",
    "ShapeError",
    "SingularMatrixError",
    "SpectralKernel",
    "StateError",
    "SweepSpec",
    "TNSolveReport",
    "TensorNetworkHHL",
    "TnhhlError",
    "WTensor",
    "apply_clock_fourier",
    "apply_conditional_rotation",
    "apply_controlled_powers",
    "build_damped_oscillator",
    "build_forced_oscillator",
    "build_fourier",
    "build_heat2d",
    "build_inverse_fourier",
    "build_inverter",
    "build_phase_kickback",
    "build_w",
    "calibrate_scale",
    "choose_time",
    "conjugate_gradient",
    "contract_efficient",
    "contract_naive",
    "emit_results",
    "extract_solution",
    "hermitian_eigen",
    "hermitize",
    "init_state",
    "invert_matrix",
    "lu_solve",
    "matmul",
    "postselect_ancilla_one",
    "read_records",
    "rmse",
    "run_experiment",
    "run_sweep",
    "simulate_full",
    "solve",
    "unitary_exp",
    "vec_mat",
]
