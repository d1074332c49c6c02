"""Siegert pseudostates on the Lagrange mesh and their pole expansions.

For ``l = 0`` the outgoing-wave condition at ``r = a`` makes the pseudostate
equation a quadratic pencil in ``k``,

    [C(0) - (i k / 2) f(a) f(a)^T - (k^2 / 2) N] c = 0,

with ``2N`` eigenpairs, found here by companion linearization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AccuracyWarningError,
    ConvergenceError,
    EigenSolverError,
    InvalidArgumentError,
    PoleEvaluationError,
)
from .matrices import SystemMatrices, assemble_C, overlap_matrix, overlap_rank_one, rank_one_power
from .mesh import LagrangeMesh, basis_matrix
from .scattering import ScatteringProblem, log_derivative, r_matrix

__all__ = [
    "SiegertSet",
    "PoleClassification",
    "siegert_solve_l0",
    "solve_problem",
    "siegert_normalize",
    "normalization_integrals",
    "s_matrix_product",
    "s_matrix_sum",
    "siegert_wavefunction",
    "siegert_residual",
    "pole_function",
    "find_pole",
    "classify_poles",
]

_ZERO_REAL_TOL = 1e-8
_POLE_TOL = 1e-12
_NORM_CANCELLATION_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SiegertSet:
    """The ``2N`` pseudostates of one problem.

    ``coefficients[n]`` expands state ``n`` on the Lagrange basis and
    ``boundary_values[n]`` is its value at ``r = a``. ``unnormalizable`` flags
    states whose normalization integral cancels to roundoff.
    """

    wave_numbers: np.ndarray
    coefficients: np.ndarray
    boundary_values: np.ndarray
    normalized: bool
    mesh_ref: LagrangeMesh
    gauss_overlap_used: bool
    unnormalizable: np.ndarray = None
    problem: ScatteringProblem | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.unnormalizable is None:
            object.__setattr__(self, "unnormalizable", np.zeros(self.wave_numbers.size, dtype=bool))

    def __len__(self):
        return self.wave_numbers.size

    @property
    def channel_radius(self) -> float:
        return self.mesh_ref.channel_radius


@dataclass(frozen=True)
class PoleClassification:
    physical: tuple
    unconverged: tuple
    criterion_value: np.ndarray
    mode: str
    tolerance: float


def _sort_key(k: complex):
    re = 0.0 if abs(k.real) <= _ZERO_REAL_TOL * max(1.0, abs(k)) else k.real
    sign = 0 if re == 0 else (1 if re > 0 else 2)
    return (sign, abs(re), k.imag)


def siegert_solve_l0(sys: SystemMatrices, mesh: LagrangeMesh, *, allow_nonzero_l: bool = False) -> SiegertSet:
    """All ``2N`` pseudostates with the s-wave outgoing condition ``L_0 = ika``.

    The overlap is first reduced to the identity with ``N^{-1/2}``; with
    ``A = N^{-1/2} C(0) N^{-1/2}`` and ``w = N^{-1/2} f(a)`` the eigenvalues of
    ``[[0, 1], [2A, -i w w^T]]`` are the wave numbers, with eigenvectors
    ``(d, k d)`` and ``c = N^{-1/2} d``.

    ``allow_nonzero_l`` applies the s-wave boundary condition to a system
    assembled for ``l > 0`` (the pseudostates are then only a basis, not
    poles of that partial wave).
    """
    if not allow_nonzero_l and sys.l != 0:
        raise InvalidArgumentError("the quadratic pseudostate problem holds for l = 0 only")
    if not sys.short_range:
        raise InvalidArgumentError("the s-wave outgoing condition needs a short-range potential")
    n = sys.n_points
    if sys.gauss_overlap_used:
        a_mat = sys.c0
        w = sys.surface
        inv_sqrt = None
    else:
        inv_sqrt = rank_one_power(overlap_rank_one(mesh), -0.5)
        a_mat = inv_sqrt.apply(inv_sqrt.apply(sys.c0).T).T
        a_mat = 0.5 * (a_mat + a_mat.T)
        w = inv_sqrt.apply(sys.surface)

    companion = np.zeros((2 * n, 2 * n), dtype=complex)
    companion[:n, n:] = np.eye(n)
    companion[n:, :n] = 2 * a_mat
    companion[n:, n:] = -1j * np.outer(w, w)
    try:
        eigvals, eigvecs = np.linalg.eig(companion)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(2 * n, str(exc)) from exc
    if not np.all(np.isfinite(eigvals)):
        raise EigenSolverError(2 * n, "non-finite eigenvalues")

    # purely imaginary poles are exact in exact arithmetic; drop roundoff in Re k
    eigvals = np.array(
        [complex(0.0, k.imag) if abs(k.real) <= _ZERO_REAL_TOL * max(1.0, abs(k)) else k for k in eigvals]
    )
    order = sorted(range(2 * n), key=lambda i: _sort_key(eigvals[i]))
    eigvals = eigvals[order]
    d = eigvecs[:n, order]
    coeffs = d if inv_sqrt is None else inv_sqrt.apply(d)
    coeffs = coeffs / np.linalg.norm(coeffs, axis=0)
    # fix the arbitrary phase so the largest component is real and positive
    pivot = coeffs[np.argmax(np.abs(coeffs), axis=0), np.arange(2 * n)]
    coeffs = coeffs * (np.abs(pivot) / pivot)
    coeffs = coeffs.T.copy()
    return SiegertSet(
        wave_numbers=eigvals,
        coefficients=coeffs,
        boundary_values=coeffs @ sys.surface,
        normalized=False,
        mesh_ref=mesh,
        gauss_overlap_used=sys.gauss_overlap_used,
    )


def solve_problem(problem: ScatteringProblem, *, normalize: bool = True) -> SiegertSet:
    """Solve the pseudostates of an s-wave problem and keep a link back to it."""
    sset = siegert_solve_l0(problem.sys, problem.mesh)
    sset = siegert_normalize(sset) if normalize else sset
    return _replace(sset, problem=problem)


def _replace(sset: SiegertSet, **changes) -> SiegertSet:
    values = {f: getattr(sset, f) for f in sset.__dataclass_fields__}
    values.update(changes)
    return SiegertSet(**values)


def normalization_integrals(sset: SiegertSet):
    """Both terms ``c^T N c`` and ``i phi(a)^2 / (2k)`` of the pseudostate norm."""
    overlap = overlap_matrix(sset.mesh_ref, sset.gauss_overlap_used)
    volume = np.einsum("ni,ij,nj->n", sset.coefficients, overlap, sset.coefficients)
    surface = 1j * sset.boundary_values**2 / (2 * sset.wave_numbers)
    return volume, surface


def siegert_normalize(sset: SiegertSet) -> SiegertSet:
    """Scale every state so that ``int_0^a phi^2 dr + i phi(a)^2 / (2k) = 1``.

    The integral is ``c^T N c`` with the same overlap matrix that entered the
    eigenproblem. States where the two terms cancel to roundoff are flagged
    ``unnormalizable`` and left unscaled.
    """
    volume, surface = normalization_integrals(sset)
    norm = volume + surface
    scale_ref = np.abs(volume) + np.abs(surface)
    bad = np.abs(norm) < _NORM_CANCELLATION_TOL * scale_ref
    factor = np.where(bad, 1.0, 1 / np.sqrt(np.where(bad, 1.0, norm)))
    return _replace(
        sset,
        coefficients=sset.coefficients * factor[:, None],
        boundary_values=sset.boundary_values * factor,
        normalized=True,
        unnormalizable=bad,
    )


def _check_not_pole(sset: SiegertSet, k):
    gap = np.min(np.abs(sset.wave_numbers - k))
    if gap < _POLE_TOL:
        raise PoleEvaluationError(f"k = {k!r} coincides with a pseudostate wave number")


def s_matrix_product(sset: SiegertSet, k: complex) -> complex:
    """``S_0(k) = e^{-2ika} prod_n (k_n + k) / (k_n - k)`` over all ``2N`` poles."""
    _check_not_pole(sset, k)
    kn = sset.wave_numbers
    return complex(cmath.exp(-2j * k * sset.channel_radius) * np.prod((kn + k) / (kn - k)))


def _pole_sum_terms(sset: SiegertSet, k):
    if not sset.normalized:
        raise InvalidArgumentError("pole sums need a normalized pseudostate set")
    _check_not_pole(sset, k)
    kn = sset.wave_numbers
    return 1 / (kn * (kn - k))


def s_matrix_sum(sset: SiegertSet, k: float) -> complex:
    """``S_0(k) = e^{-2ika} [1 + ik sum_n phi_n(a)^2 / (k_n (k_n - k))]``.

    Raises :class:`AccuracyWarningError` (carrying the partial sum) when some
    states could not be normalized.
    """
    weights = _pole_sum_terms(sset, k)
    good = ~sset.unnormalizable
    total = np.sum(sset.boundary_values[good] ** 2 * weights[good])
    s = complex(cmath.exp(-2j * k * sset.channel_radius) * (1 + 1j * k * total))
    if not np.all(good):
        raise AccuracyWarningError(s, np.flatnonzero(~good))
    return s


def siegert_wavefunction(sset: SiegertSet, k: float, r_grid) -> np.ndarray:
    """Internal wave function as a sum over pseudostates.

    Normalized so that ``u(a) = e^{-ika} - S e^{ika}``, matching the
    R-matrix internal wave function for ``l = 0``.
    """
    weights = _pole_sum_terms(sset, k)
    good = ~sset.unnormalizable
    phi_r = basis_matrix(sset.mesh_ref, r_grid) @ sset.coefficients[good].T
    u = -1j * k * cmath.exp(-1j * k * sset.channel_radius) * (phi_r @ (sset.boundary_values[good] * weights[good]))
    if not np.all(good):
        raise AccuracyWarningError(u, np.flatnonzero(~good))
    return u


def siegert_residual(sys: SystemMatrices, mesh: LagrangeMesh, l: int, k: complex, c=None) -> float:
    """Residual of ``[C(L_l(ka)) - (k^2/2) N] c``.

    Without ``c``, the smallest singular value of that matrix is returned
    (zero exactly at a pseudostate of partial wave ``l``).
    """
    k = complex(k)
    boundary = log_derivative(l, k * mesh.channel_radius)
    m = assemble_C(sys, boundary) - 0.5 * k * k * sys.overlap
    if c is None:
        return float(np.linalg.svd(m, compute_uv=False)[-1])
    c = np.asarray(c)
    return float(np.linalg.norm(m @ c) / np.linalg.norm(c))


def pole_function(problem: ScatteringProblem, k: complex) -> complex:
    """``1 - L_l(ka) R_l(0; k^2/2)``, whose zeros are the pseudostate wave numbers.

    By the matrix determinant lemma this equals
    ``det[C(L_l) - E N] / det[C(0) - E N]``, so it is analytic in ``k`` away
    from real R-matrix poles.
    """
    k = complex(k)
    ka = k * problem.channel_radius
    return 1 - log_derivative(problem.l, ka) * r_matrix(problem, 0.5 * k * k, 0.0)


def _pencil(problem: ScatteringProblem, k: complex) -> np.ndarray:
    sys = problem.sys
    return assemble_C(sys, log_derivative(problem.l, k * problem.channel_radius)) - 0.5 * k * k * sys.overlap


def find_pole(problem: ScatteringProblem, k0: complex, *, tol: float = 1e-12, max_iter: int = 100) -> complex:
    """Refine one pseudostate wave number of any supported ``l`` by complex Newton.

    The iteration drives the smallest-modulus eigenvalue ``mu(k)`` of
    ``C(L_l(ka)) - (k^2/2) N`` to zero, with ``mu' = x^T M'(k) x / x^T x``
    for the complex-symmetric pencil. Poles whose states are small at
    ``r = a`` have a tiny ``mu'`` and are conditioned only to about
    ``eps |M| / |mu'|``; once ``|mu|`` stops decreasing the best iterate is
    returned.
    """
    k = complex(k0)
    best_k, best_mu = k, math.inf
    stalls, prev_mu = 0, math.inf
    for _ in range(max_iter):
        vals, vecs = np.linalg.eig(_pencil(problem, k))
        i = int(np.argmin(np.abs(vals)))
        mu = abs(vals[i])
        if mu < best_mu:
            best_k, best_mu = k, mu
        x = vecs[:, i]
        h = 1e-7 * max(1.0, abs(k))
        dm = (_pencil(problem, k + h) - _pencil(problem, k - h)) / (2 * h)
        slope = (x @ dm @ x) / (x @ x)
        if slope == 0 or not cmath.isfinite(slope):
            raise ConvergenceError(f"zero or non-finite eigenvalue slope at k={k!r}")
        dk = vals[i] / slope
        k -= dk
        if not cmath.isfinite(k):
            raise ConvergenceError("Newton iterate diverged")
        if abs(dk) < tol * max(1.0, abs(k)):
            return k
        # inside the basin the step shrinks until roundoff in mu takes over
        stalls = stalls + 1 if abs(dk) < 1e-5 * max(1.0, abs(k)) and mu > 0.5 * prev_mu else 0
        if stalls >= 3:
            return best_k
        prev_mu = mu
    raise ConvergenceError(f"pole search did not converge from {k0!r} in {max_iter} steps")


def classify_poles(sset: SiegertSet, reference=None, *, tolerance: float | None = None) -> PoleClassification:
    """Split poles into physical and unconverged ones.

    With ``reference`` roots, a pole within ``tolerance`` (default 1e-3) of
    one of them is physical. Otherwise the problem is re-solved with ``N + 5``
    points and a pole that moves by less than ``tolerance`` (default 1e-4)
    is physical.
    """
    kn = sset.wave_numbers
    if reference is not None and len(reference) > 0:
        tol = 1e-3 if tolerance is None else tolerance
        ref = np.asarray(reference, dtype=complex)
        dist = np.min(np.abs(kn[:, None] - ref[None, :]), axis=1)
        mode = "reference"
    else:
        if sset.problem is None:
            raise InvalidArgumentError("stability classification needs a set produced by solve_problem")
        tol = 1e-4 if tolerance is None else tolerance
        p = sset.problem
        bigger = ScatteringProblem.build(
            p.potential,
            l=p.l,
            n_points=p.mesh.n_points + 5,
            channel_radius=p.channel_radius,
            gauss_overlap=p.gauss_overlap,
        )
        other = siegert_solve_l0(bigger.sys, bigger.mesh).wave_numbers
        dist = np.min(np.abs(kn[:, None] - other[None, :]), axis=1)
        mode = "stability-based"
    physical = tuple(int(i) for i in np.flatnonzero(dist < tol))
    unconverged = tuple(int(i) for i in np.flatnonzero(dist >= tol))
    return PoleClassification(physical, unconverged, dist, mode, tol)
