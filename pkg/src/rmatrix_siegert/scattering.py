"""R-matrix, S-matrix and internal wave function on a Lagrange mesh.

Units are hbar = m = 1, so ``E = k^2 / 2``.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidArgumentError, LogDerivativePoleError, NumericalError, RMatrixPoleError
from .matrices import SystemMatrices, assemble_C, assemble_system
from .mesh import LagrangeMesh, basis_matrix, build_mesh
from .oracles import phase_shift_deg

__all__ = [
    "AsymptoticPair",
    "ScatteringProblem",
    "ScatteringResult",
    "asymptotics",
    "log_derivative",
    "wave_number",
    "r_matrix",
    "s_matrix",
    "s_matrix_complexB",
    "internal_wavefunction",
    "penetration_factor",
    "hard_sphere_phase",
]

RCOND_MIN = 1e-14
SUPPORTED_L = (0, 1)


@dataclass(frozen=True)
class AsymptoticPair:
    """Free incoming/outgoing waves ``I_l(z)``, ``O_l(z)`` and their z-derivatives."""

    value_in: complex
    value_out: complex
    derivative_in: complex
    derivative_out: complex


def asymptotics(l: int, z: complex) -> AsymptoticPair:
    z = complex(z)
    if l == 0:
        e_out = cmath.exp(1j * z)
        e_in = cmath.exp(-1j * z)
        return AsymptoticPair(e_in, e_out, -1j * e_in, 1j * e_out)
    if l == 1:
        if z == 0:
            raise InvalidArgumentError("l=1 asymptotic functions are singular at z=0")
        e_out = cmath.exp(1j * z)
        e_in = cmath.exp(-1j * z)
        # O_1 = -i (1 - 1/(iz)) e^{iz} = (1/z - i) e^{iz}; I_1 is its i -> -i image
        return AsymptoticPair(
            value_in=(1 / z + 1j) * e_in,
            value_out=(1 / z - 1j) * e_out,
            derivative_in=(1 - 1j / z - 1 / z**2) * e_in,
            derivative_out=(1 + 1j / z - 1 / z**2) * e_out,
        )
    raise NotImplementedError(f"asymptotic functions for l={l} are not implemented (only l in {SUPPORTED_L})")


def log_derivative(l: int, ka: complex, *, incoming: bool = False) -> complex:
    """``L_l = ka O_l'(ka) / O_l(ka)``; with ``incoming=True`` the same for ``I_l``.

    For real ``ka`` the incoming version is the complex conjugate of ``L_l``,
    and it is its analytic continuation elsewhere.
    """
    ka = complex(ka)
    if l == 0:
        return -1j * ka if incoming else 1j * ka
    pair = asymptotics(l, ka)
    value, deriv = (pair.value_in, pair.derivative_in) if incoming else (pair.value_out, pair.derivative_out)
    if value == 0:
        raise LogDerivativePoleError(f"O_{l}(ka) vanishes at ka={ka!r}")
    return ka * deriv / value


def wave_number(energy) -> complex | float:
    """Principal-branch ``k = sqrt(2E)``; real for real ``E >= 0``."""
    if np.isrealobj(energy) and float(np.real(energy)) >= 0:
        return float(np.sqrt(2 * float(energy)))
    return complex(cmath.sqrt(2 * complex(energy)))


@dataclass(frozen=True, eq=False)
class ScatteringProblem:
    l: int
    potential: object
    mesh: LagrangeMesh
    sys: SystemMatrices

    @classmethod
    def build(cls, potential, *, l: int = 0, n_points: int, channel_radius: float, gauss_overlap: bool = True):
        mesh = build_mesh(n_points, channel_radius)
        return cls(l=l, potential=potential, mesh=mesh, sys=assemble_system(mesh, potential, l, gauss_overlap))

    @property
    def channel_radius(self) -> float:
        return self.mesh.channel_radius

    @property
    def gauss_overlap(self) -> bool:
        return self.sys.gauss_overlap_used

    def with_overlap(self, gauss_overlap: bool) -> "ScatteringProblem":
        sys = assemble_system(self.mesh, self.potential, self.l, gauss_overlap)
        return ScatteringProblem(self.l, self.potential, self.mesh, sys)


@dataclass(frozen=True)
class ScatteringResult:
    k: complex | float
    energy: complex | float
    r_value: complex
    s_value: complex
    phase_shift_deg: float
    boundary_param: complex

    @property
    def phase_shift(self) -> float:
        """Phase shift in radians, in [0, pi)."""
        return np.radians(self.phase_shift_deg)


def _resolvent_surface(problem: ScatteringProblem, energy, boundary):
    """Solve ``(C(B) - E N) y = f(a)``; return ``(R(B), y)``."""
    sys = problem.sys
    m = assemble_C(sys, boundary) - energy * sys.overlap
    dtype = np.result_type(m, np.complex128) if np.iscomplexobj(m) else float
    m = np.asarray(m, dtype=dtype)
    anorm = np.linalg.norm(m, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(m, check_finite=False)
    (gecon,) = sla.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or not rcond >= RCOND_MIN:
        raise RMatrixPoleError(energy, float(rcond))
    y = sla.lu_solve((lu, piv), sys.surface.astype(lu.dtype), check_finite=False)
    r_value = sys.surface @ y / (2 * problem.channel_radius)
    return complex(r_value), y


def r_matrix(problem: ScatteringProblem, energy, boundary=0.0) -> complex:
    """Dimensionless R-matrix ``(2a)^-1 f(a)^T [C(B) - E N]^-1 f(a)``."""
    return _resolvent_surface(problem, energy, boundary)[0]


def _s_from_r(problem, k, r_value, boundary):
    ka = k * problem.channel_radius
    pair = asymptotics(problem.l, ka)
    l_out = log_derivative(problem.l, ka)
    l_in = log_derivative(problem.l, ka, incoming=True)
    den = 1 - (l_out - boundary) * r_value
    if den == 0:
        raise NumericalError(f"S-matrix pole at k={k!r}")
    return pair.value_in / pair.value_out * (1 - (l_in - boundary) * r_value) / den


def s_matrix(problem: ScatteringProblem, energy, boundary=0.0) -> ScatteringResult:
    """S-matrix through the R-matrix at boundary parameter ``B``.

    The result does not depend on ``B``. ``energy`` may be complex for pole
    studies; the incoming log-derivative is then continued analytically.
    """
    k = wave_number(energy)
    r_value, _ = _resolvent_surface(problem, energy, boundary)
    s = complex(_s_from_r(problem, k, r_value, boundary))
    return ScatteringResult(k, energy, r_value, s, phase_shift_deg(s), complex(boundary))


def _require_positive_energy(energy):
    if np.iscomplexobj(energy) or not float(energy) > 0:
        raise InvalidArgumentError(f"a physical energy E > 0 is required, got {energy!r}")


def s_matrix_complexB(problem: ScatteringProblem, energy: float) -> ScatteringResult:
    """S-matrix with ``B = L_l``: ``e^{-2i phi_l} [1 + 2i P_l R_l(L_l)]``."""
    _require_positive_energy(energy)
    k = wave_number(energy)
    ka = k * problem.channel_radius
    boundary = log_derivative(problem.l, ka)
    penetration = boundary.imag
    pair = asymptotics(problem.l, ka)
    # e^{-2i phi} = I/O for real k
    hard_sphere = pair.value_in / pair.value_out
    r_value, _ = _resolvent_surface(problem, energy, boundary)
    s = complex(hard_sphere * (1 + 2j * penetration * r_value))
    return ScatteringResult(k, energy, r_value, s, phase_shift_deg(s), boundary)


def penetration_factor(l: int, ka: float) -> float:
    return log_derivative(l, ka).imag


def hard_sphere_phase(l: int, ka: float) -> float:
    """Half the phase of ``O_l/I_l`` (radians), continued from 0 at small ``ka`` for l=0."""
    if l == 0:
        return float(ka)
    pair = asymptotics(l, ka)
    return cmath.phase(pair.value_out / pair.value_in) / 2


def internal_wavefunction(problem: ScatteringProblem, energy, boundary, r_grid) -> np.ndarray:
    """Internal wave function normalized so that ``u(a) = I_l(ka) - S_l O_l(ka)``."""
    _require_positive_energy(energy)
    k = wave_number(energy)
    r_value, y = _resolvent_surface(problem, energy, boundary)
    s = _s_from_r(problem, k, r_value, boundary)
    pair = asymptotics(problem.l, k * problem.channel_radius)
    amplitude = (pair.value_in - s * pair.value_out) / (2 * problem.channel_radius * r_value)
    return amplitude * (basis_matrix(problem.mesh, r_grid) @ y)
