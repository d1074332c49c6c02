"""Matrix elements on the Lagrange-Legendre mesh and rank-one linear algebra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, OutOfDomainError, SingularPotentialError, SingularUpdateError
from .mesh import LagrangeMesh

__all__ = [
    "SystemMatrices",
    "RankOneSymmetric",
    "overlap_matrix",
    "overlap_rank_one",
    "kinetic_bloch_matrix",
    "potential_matrix",
    "centrifugal_matrix",
    "surface_values",
    "assemble_system",
    "assemble_C",
    "sherman_morrison_inverse",
    "sherman_morrison_vector",
    "sherman_morrison_scalar",
    "rank_one_power",
]

_SM_DENOMINATOR_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class SystemMatrices:
    """Real matrices defining the internal problem at one partial wave.

    ``c0`` is ``<f_i| T_l + L(0) + V |f_j>`` (kinetic + Bloch + centrifugal +
    potential), ``overlap`` is either the exact overlap or the identity, and
    ``surface`` holds ``f_i(a)``.
    """

    c0: np.ndarray
    overlap: np.ndarray
    surface: np.ndarray
    gauss_overlap_used: bool
    channel_radius: float
    l: int = 0
    short_range: bool = True

    @property
    def n_points(self) -> int:
        return self.surface.size


@dataclass(frozen=True, eq=False)
class RankOneSymmetric:
    """The matrix ``1 + alpha u u^T`` with ``|u| = 1``."""

    alpha: float
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        norm = np.linalg.norm(u)
        if not np.isclose(norm, 1.0, rtol=0, atol=1e-13):
            raise InvalidArgumentError(f"u must be a unit vector (|u| = {norm!r})")
        object.__setattr__(self, "u", u)

    def dense(self) -> np.ndarray:
        return np.eye(self.u.size) + self.alpha * np.outer(self.u, self.u)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """``(1 + alpha u u^T) v`` without forming the matrix; ``v`` may be a matrix."""
        v = np.asarray(v)
        return v + self.alpha * np.outer(self.u, self.u @ v).reshape(v.shape)


def overlap_rank_one(mesh: LagrangeMesh) -> RankOneSymmetric:
    """Exact overlap of the Lagrange functions as ``1 + alpha u u^T``."""
    n = mesh.n_points
    signs = (-1.0) ** np.arange(1, n + 1)
    u = signs * np.sqrt(mesh.complements / mesh.nodes) / n
    return RankOneSymmetric(alpha=n**2 / (2 * n + 1), u=u)


def overlap_matrix(mesh: LagrangeMesh, gauss_approx: bool = True) -> np.ndarray:
    n = mesh.n_points
    if gauss_approx:
        return np.eye(n)
    signs = (-1.0) ** np.arange(n)
    v = signs * np.sqrt(mesh.complements / mesh.nodes)
    return np.eye(n) + np.outer(v, v) / (2 * n + 1)


def kinetic_bloch_matrix(mesh: LagrangeMesh) -> np.ndarray:
    """``<f_i| T_0 + L(0) |f_j>``, including the factor 1/2 of ``T_0``."""
    n = mesh.n_points
    a = mesh.channel_radius
    x = mesh.nodes
    y = mesh.complements
    xy = x * y
    signs = (-1.0) ** np.arange(n)
    # node differences taken from whichever of x, 1 - x is small, to avoid cancellation
    upper = x > 0.5
    dx = np.where(
        upper[:, None] & upper[None, :],
        y[None, :] - y[:, None],
        x[:, None] - x[None, :],
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (
            n * (n + 1)
            + 1
            + (np.outer(x, y) + np.outer(y, x)) / dx**2
            - 1 / y[:, None]
            - 1 / y[None, :]
        )
        off *= np.outer(signs, signs) / (2 * a**2 * np.sqrt(np.outer(xy, xy)))
    diag = (4 * n * (n + 1) + 3 + (1 - 6 * x) / xy) / (6 * a**2 * xy)
    np.fill_diagonal(off, diag)
    return off


def potential_matrix(mesh: LagrangeMesh, potential) -> np.ndarray:
    values = np.array([potential(r) for r in mesh.radii], dtype=float)
    if not np.all(np.isfinite(values)):
        bad = mesh.radii[~np.isfinite(values)]
        raise SingularPotentialError(f"potential is not finite at r = {bad.tolist()}")
    return np.diag(values)


def centrifugal_matrix(mesh: LagrangeMesh, l: int) -> np.ndarray:
    if l < 0:
        raise InvalidArgumentError(f"partial wave must be >= 0, got {l}")
    return np.diag(l * (l + 1) / (2 * mesh.radii**2))


def surface_values(mesh: LagrangeMesh) -> np.ndarray:
    """``f_i(a) = (-1)^(N-i) / sqrt(a x_i (1 - x_i))``."""
    n = mesh.n_points
    signs = (-1.0) ** (n - 1 - np.arange(n))
    return signs / np.sqrt(mesh.channel_radius * mesh.nodes * mesh.complements)


def assemble_system(mesh: LagrangeMesh, potential, l: int = 0, gauss_overlap: bool = True) -> SystemMatrices:
    """Assemble ``C(0)``, the overlap and the surface vector.

    ``potential`` is a callable of ``r``; an object with a ``short_range``
    attribute (see :mod:`rmatrix_siegert.potentials`) passes that flag on.
    """
    if int(l) != l or l < 0:
        raise InvalidArgumentError(f"partial wave must be a non-negative integer, got {l!r}")
    c0 = kinetic_bloch_matrix(mesh) + centrifugal_matrix(mesh, l) + potential_matrix(mesh, potential)
    c0 = 0.5 * (c0 + c0.T)
    return SystemMatrices(
        c0=c0,
        overlap=overlap_matrix(mesh, gauss_overlap),
        surface=surface_values(mesh),
        gauss_overlap_used=bool(gauss_overlap),
        channel_radius=mesh.channel_radius,
        l=int(l),
        short_range=bool(getattr(potential, "short_range", True)),
    )


def assemble_C(sys: SystemMatrices, boundary) -> np.ndarray:
    """``C(B) = C(0) - (B / 2a) f(a) f(a)^T``."""
    if boundary == 0:
        return sys.c0
    return sys.c0 - (boundary / (2 * sys.channel_radius)) * np.outer(sys.surface, sys.surface)


def _sm_denominator(v, b_inv_u):
    denom = 1 + v @ b_inv_u
    if abs(denom) < _SM_DENOMINATOR_TOL:
        raise SingularUpdateError(f"1 + v^T B^-1 u = {denom!r} is numerically zero")
    return denom


def sherman_morrison_inverse(b_inv, u, v) -> np.ndarray:
    """Inverse of ``B + u v^T`` from ``B^-1``."""
    b_inv = np.asarray(b_inv)
    b_inv_u = b_inv @ u
    denom = _sm_denominator(v, b_inv_u)
    return b_inv - np.outer(b_inv_u, v @ b_inv) / denom


def sherman_morrison_vector(b_inv, u, v) -> np.ndarray:
    """``(B + u v^T)^-1 u = B^-1 u / (1 + v^T B^-1 u)``."""
    b_inv_u = np.asarray(b_inv) @ u
    return b_inv_u / _sm_denominator(v, b_inv_u)


def sherman_morrison_scalar(b_inv, u, v):
    """``v^T (B + u v^T)^-1 u`` through ``1 / (1 + 1 / (v^T B^-1 u))``."""
    b_inv_u = np.asarray(b_inv) @ u
    _sm_denominator(v, b_inv_u)
    return 1 / (1 + 1 / (v @ b_inv_u))


def rank_one_power(m: RankOneSymmetric, exponent: float) -> RankOneSymmetric:
    """``(1 + alpha u u^T)^p = 1 + ((1 + alpha)^p - 1) u u^T``."""
    base = 1 + m.alpha
    if base <= 0 and float(exponent) != int(exponent):
        raise OutOfDomainError(f"fractional power of a matrix with eigenvalue {base!r} <= 0")
    if base == 0 and exponent < 0:
        raise SingularUpdateError("negative power of a singular matrix")
    return RankOneSymmetric(alpha=base**exponent - 1, u=m.u)
