"""Single-channel scattering with the Lagrange-mesh R-matrix and Siegert pseudostates.

Both methods share one shifted Gauss-Legendre basis on ``[0, a]``. Units are
hbar = m = 1, so ``E = k^2 / 2``.

    >>> from rmatrix_siegert import ScatteringProblem, bargmann, s_matrix
    >>> prob = ScatteringProblem.build(bargmann(2, -1), n_points=25, channel_radius=5)
    >>> round(s_matrix(prob, 1.0).phase_shift_deg, 6)
    89.999991
"""

from .errors import (
    AccuracyWarningError,
    ConvergenceError,
    EigenSolverError,
    InvalidArgumentError,
    LogDerivativePoleError,
    NumericalError,
    OutOfDomainError,
    PoleEvaluationError,
    RMatrixPoleError,
    RMatrixSiegertError,
    SingularPotentialError,
    SingularUpdateError,
)
from .matrices import (
    RankOneSymmetric,
    SystemMatrices,
    assemble_C,
    assemble_system,
    centrifugal_matrix,
    kinetic_bloch_matrix,
    overlap_matrix,
    overlap_rank_one,
    potential_matrix,
    rank_one_power,
    sherman_morrison_inverse,
    sherman_morrison_scalar,
    sherman_morrison_vector,
    surface_values,
)
from .mesh import LagrangeMesh, basis_eval, basis_matrix, build_mesh, gauss_integrate
from .oracles import (
    BargmannParams,
    bargmann_phase_shift_deg,
    bargmann_potential,
    bargmann_s_exact,
    bargmann_truncated_k_residual,
    bargmann_truncated_wf,
    complex_newton,
    find_truncated_poles,
    free_l1_wave,
    phase_shift_deg,
)
from .potentials import Potential, bargmann, constant, parse_potential, zero
from .scattering import (
    AsymptoticPair,
    ScatteringProblem,
    ScatteringResult,
    asymptotics,
    hard_sphere_phase,
    internal_wavefunction,
    log_derivative,
    penetration_factor,
    r_matrix,
    s_matrix,
    s_matrix_complexB,
    wave_number,
)
from .siegert import (
    PoleClassification,
    SiegertSet,
    classify_poles,
    find_pole,
    normalization_integrals,
    s_matrix_product,
    s_matrix_sum,
    siegert_normalize,
    siegert_residual,
    siegert_solve_l0,
    siegert_wavefunction,
    solve_problem,
)

__version__ = "0.1.0"
