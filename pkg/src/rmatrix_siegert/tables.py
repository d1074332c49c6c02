"""Row builders behind the CLI: phase shifts, pole lists, wave functions and the
Bargmann pole and phase-shift tables.

Every builder returns ``(header, rows)`` with plain Python numbers so the
caller only has to format them.
"""

from __future__ import annotations

import logging
import math
from itertools import product

import numpy as np

from .errors import AccuracyWarningError, InvalidArgumentError
from .oracles import BargmannParams, bargmann_phase_shift_deg, find_truncated_poles, phase_shift_deg
from .potentials import Potential, bargmann, bargmann_params
from .scattering import ScatteringProblem, internal_wavefunction, s_matrix, wave_number
from .siegert import (
    classify_poles,
    s_matrix_product,
    siegert_normalize,
    siegert_residual,
    siegert_solve_l0,
    siegert_wavefunction,
    solve_problem,
)

__all__ = [
    "DEFAULT_BARGMANN",
    "TABLE3_ENERGIES",
    "TABLE3_RADII",
    "TABLE3_SIZES",
    "phaseshift_rows",
    "poles_rows",
    "wavefunction_rows",
    "select_pole_row",
    "bargmann_pole_line",
    "table2_rows",
    "table3_rows",
    "fig1_rows",
]

logger = logging.getLogger(__name__)

DEFAULT_BARGMANN = (2.0, -1.0)
TABLE3_ENERGIES = (0.1, 1.0, 10.0)
TABLE3_RADII = (5.0, 6.0)
TABLE3_SIZES = (25, 40)
TABLE2_ROWS = 13
# pseudostates below this imaginary part are left out of the pole row
_ROW_MIN_IMAG = -3.0


def _exact_phase_shift(potential: Potential, l: int, energy: float):
    params = bargmann_params(potential)
    if params is not None and l == 0:
        return bargmann_phase_shift_deg(params, energy)
    if potential.name == "zero":
        return 0.0
    return None


def phaseshift_rows(potential: Potential, *, l: int, a: float, n: int, energies, gauss_overlap: bool = True):
    """One row per energy: R-matrix, pole-product and (when known) exact phase shifts.

    The product column needs the s-wave pseudostates and is left empty otherwise.
    """
    bad = [e for e in energies if not e > 0]
    if bad:
        raise InvalidArgumentError(f"phase shifts need E > 0, got {bad}")
    problem = ScatteringProblem.build(potential, l=l, n_points=n, channel_radius=a, gauss_overlap=gauss_overlap)
    sset = solve_problem(problem, normalize=False) if l == 0 and potential.short_range else None
    header = ["E", "k", "delta_deg_rmatrix", "delta_deg_product", "delta_deg_exact"]
    rows = []
    for energy in energies:
        k = wave_number(energy)
        rm = s_matrix(problem, energy).phase_shift_deg
        prod = phase_shift_deg(s_matrix_product(sset, k)) if sset is not None else None
        rows.append([energy, k, rm, prod, _exact_phase_shift(potential, l, energy)])
    return header, rows


def poles_rows(potential: Potential, *, l: int, a: float, n: int, gauss_overlap: bool = True):
    """All ``2N`` pseudostate wave numbers with residuals and a physical/unconverged label.

    For Bargmann potentials the label compares with roots of the truncated
    Bargmann condition; otherwise the ``N`` vs ``N + 5`` stability test is used.
    """
    if l != 0:
        raise InvalidArgumentError("pseudostate poles are computed for l = 0 only")
    problem = ScatteringProblem.build(potential, l=0, n_points=n, channel_radius=a, gauss_overlap=gauss_overlap)
    sset = solve_problem(problem)
    params = bargmann_params(potential)
    reference = None
    if params is not None:
        reference = find_truncated_poles(params, a, sset.wave_numbers).roots
    cls = classify_poles(sset, reference)
    physical = set(cls.physical)
    header = ["n", "re_k", "im_k", "residual", "class"]
    rows = []
    for i, (k, c) in enumerate(zip(sset.wave_numbers, sset.coefficients)):
        res = siegert_residual(problem.sys, problem.mesh, 0, k, c)
        rows.append([i + 1, k.real, k.imag, res, "physical" if i in physical else "unconverged"])
    return header, rows


def wavefunction_rows(
    potential: Potential, *, l: int, a: float, n: int, energies, gauss_overlap: bool = True, n_r: int = 101
):
    """Internal wave function on ``n_r`` equally spaced radii, by the R-matrix and the pole sum.

    For ``l > 0`` the pole sum uses pseudostates with the s-wave outgoing
    condition, which only fixes the shape of the wave function. When some
    states cannot be normalized the pole-sum columns are written as NaN.
    """
    problem = ScatteringProblem.build(potential, l=l, n_points=n, channel_radius=a, gauss_overlap=gauss_overlap)
    sset = None
    if potential.short_range:
        sset = siegert_normalize(siegert_solve_l0(problem.sys, problem.mesh, allow_nonzero_l=True))
    r_grid = np.linspace(0.0, a, n_r)
    header = ["E", "r", "re_u_rmatrix", "im_u_rmatrix", "re_u_siegert", "im_u_siegert"]
    rows = []
    for energy in energies:
        k = wave_number(energy)
        u_r = internal_wavefunction(problem, energy, 0.0, r_grid)
        u_s = np.full(n_r, np.nan + 1j * np.nan)
        if sset is not None:
            try:
                u_s = siegert_wavefunction(sset, k, r_grid)
            except AccuracyWarningError as exc:
                logger.warning(
                    "E=%g: %d pseudostates could not be normalized; pole-sum columns set to NaN",
                    energy,
                    len(exc.excluded),
                )
        for r, ur, us in zip(r_grid, u_r, u_s):
            rows.append([energy, r, ur.real, ur.imag, us.real, us.imag])
    return header, rows


def select_pole_row(wave_numbers, count: int = TABLE2_ROWS) -> np.ndarray:
    """Bound state first, then poles with ``Re k > 0`` near the real axis, by ``Re k``."""
    ks = np.asarray(wave_numbers, dtype=complex)
    bound = ks[(ks.real == 0) & (ks.imag > 0)]
    bound = bound[np.argsort(-bound.imag)]
    line = ks[(ks.real > 0) & (ks.imag > _ROW_MIN_IMAG)]
    line = line[np.argsort(line.real, kind="stable")]
    return np.concatenate([bound, line])[:count]


def bargmann_pole_line(params: BargmannParams, a: float, seeds, count: int, *, max_re: float | None = None):
    """Exact poles of the truncated Bargmann potential: bound state plus the ``Re k > 0`` line.

    ``seeds`` are pseudostate wave numbers that have converged; further
    roots are found by linear extrapolation along the line until ``count``
    roots exist (or ``Re k`` passes ``max_re``).
    """
    found = find_truncated_poles(params, a, seeds).roots
    bound = [k for k in found if abs(k.real) < 1e-8 and k.imag > 0]
    line = sorted((k for k in found if k.real > 1e-8), key=lambda k: k.real)
    # keep only a chain with steadily increasing real part
    chain = []
    for k in line:
        if not chain or k.real - chain[-1].real > 1e-3:
            chain.append(k)
    while len(bound[:1]) + len(chain) < count and len(chain) >= 2:
        if max_re is not None and chain[-1].real > max_re:
            break
        guess = 2 * chain[-1] - chain[-2]
        roots = find_truncated_poles(params, a, [guess]).roots
        if len(roots) == 0 or roots[0].real <= chain[-1].real + 1e-3:
            logger.warning("pole line extrapolation stopped after %d roots", len(chain))
            break
        chain.append(roots[0])
    return np.array(bound[:1] + chain, dtype=complex)[:count]


def _converged_seeds(sset, max_re: float = 6.0):
    ks = sset.wave_numbers
    keep = ((ks.imag > 0) & (ks.real == 0)) | ((ks.real > 0) & (ks.real < max_re) & (ks.imag > _ROW_MIN_IMAG))
    return ks[keep]


def table2_rows(*, a: float = 5.0, n: int = 25, b: float = DEFAULT_BARGMANN[0], c: float = DEFAULT_BARGMANN[1]):
    """Exact, exact-overlap and Gauss-overlap pole rows for the Bargmann potential."""
    potential = bargmann(b, c)
    gauss = solve_problem(ScatteringProblem.build(potential, n_points=n, channel_radius=a), normalize=False)
    exact_ov = solve_problem(
        ScatteringProblem.build(potential, n_points=n, channel_radius=a, gauss_overlap=False), normalize=False
    )
    exact = bargmann_pole_line(BargmannParams(b, c), a, _converged_seeds(gauss), TABLE2_ROWS)
    columns = [exact, select_pole_row(exact_ov.wave_numbers), select_pole_row(gauss.wave_numbers)]
    header = ["row", "re_k_exact", "im_k_exact", "re_k_exact_overlap", "im_k_exact_overlap", "re_k_gauss", "im_k_gauss"]
    rows = []
    for i in range(max(len(col) for col in columns)):
        row = [i + 1]
        for col in columns:
            row += [col[i].real, col[i].imag] if i < len(col) else [None, None]
        rows.append(row)
    return header, rows


def table3_rows(
    *,
    energies=TABLE3_ENERGIES,
    radii=TABLE3_RADII,
    sizes=TABLE3_SIZES,
    b: float = DEFAULT_BARGMANN[0],
    c: float = DEFAULT_BARGMANN[1],
):
    """Bargmann phase shifts: exact, pole product (both overlaps) and R-matrix at ``B = 0``."""
    potential = bargmann(b, c)
    params = BargmannParams(b, c)
    header = ["E", "delta_deg_exact", "a", "N", "delta_deg_product_exact_overlap", "delta_deg_product_gauss", "delta_deg_rmatrix"]
    sets = {}
    for a, n in product(radii, sizes):
        gauss = ScatteringProblem.build(potential, n_points=n, channel_radius=a)
        sets[a, n] = (gauss, solve_problem(gauss.with_overlap(False), normalize=False), solve_problem(gauss, normalize=False))
    rows = []
    for energy, a, n in product(energies, radii, sizes):
        k = math.sqrt(2 * energy)
        gauss, exact_ov, gauss_set = sets[a, n]
        rows.append(
            [
                energy,
                bargmann_phase_shift_deg(params, energy),
                a,
                n,
                phase_shift_deg(s_matrix_product(exact_ov, k)),
                phase_shift_deg(s_matrix_product(gauss_set, k)),
                s_matrix(gauss, energy).phase_shift_deg,
            ]
        )
    return header, rows


def fig1_rows(*, a: float = 5.0, n: int = 25, b: float = DEFAULT_BARGMANN[0], c: float = DEFAULT_BARGMANN[1]):
    """Scatter data of all pseudostate wave numbers for both overlaps plus the exact poles.

    Exact poles are followed along the line up to the largest ``|Re k|``
    reached by the pseudostates and mirrored with ``k -> -conj(k)``.
    """
    potential = bargmann(b, c)
    gauss = solve_problem(ScatteringProblem.build(potential, n_points=n, channel_radius=a), normalize=False)
    exact_ov = solve_problem(
        ScatteringProblem.build(potential, n_points=n, channel_radius=a, gauss_overlap=False), normalize=False
    )
    max_re = max(np.max(np.abs(gauss.wave_numbers.real)), np.max(np.abs(exact_ov.wave_numbers.real)))
    line = bargmann_pole_line(BargmannParams(b, c), a, _converged_seeds(gauss), 4 * n, max_re=max_re)
    mirrored = [-np.conj(k) for k in line if k.real > 0]
    exact = np.concatenate([line, mirrored])
    header = ["re_k", "im_k", "series"]
    rows = []
    for name, ks in (("exact", exact), ("exact_overlap", exact_ov.wave_numbers), ("gauss_overlap", gauss.wave_numbers)):
        rows += [[k.real, k.imag, name] for k in ks]
    return header, rows
