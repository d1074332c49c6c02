"""Shifted Gauss-Legendre mesh on [0, a] and the associated Lagrange functions."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidArgumentError, OutOfDomainError

__all__ = [
    "LagrangeMesh",
    "build_mesh",
    "legendre",
    "basis_eval",
    "basis_matrix",
    "basis_derivative_matrix",
    "gauss_integrate",
]

_NEWTON_TOL = 1e-16
_NEWTON_MAXITER = 100


def legendre(n: int, x):
    """Return ``(P_n(x), P_{n-1}(x))`` from the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for m in range(1, n + 1):
        p_prev, p = p, ((2 * m - 1) * x * p - (m - 1) * p_prev) / m
    return p, p_prev


def _legendre_near_one(n: int, y):
    """Return ``(P_n(1 - 2y), P_{n-1}(1 - 2y))`` accurate to relative precision in ``y``.

    Runs the recurrence on the differences ``d_m = P_m - P_{m-1}`` so that
    ``1 - 2y`` is never rounded.
    """
    y = np.asarray(y, dtype=float)
    q_prev = np.ones_like(y)
    q = np.ones_like(y)
    d = np.zeros_like(y)
    for m in range(1, n + 1):
        d = ((m - 1) * d - 2 * (2 * m - 1) * y * q) / m
        q_prev, q = q, q + d
    if n == 0:
        q_prev = np.zeros_like(y)
    return q, q_prev


def _readonly(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LagrangeMesh:
    """Zeros ``x_i`` of ``P_N(2x - 1)`` and the Gauss weights ``lambda_i`` on [0, 1].

    ``complements`` holds ``1 - x_i``; it is stored separately because the
    largest nodes sit within ``~1/N^2`` of 1 and the matrix elements divide
    by ``1 - x_i``.
    """

    n_points: int
    channel_radius: float
    nodes: np.ndarray
    complements: np.ndarray
    weights: np.ndarray

    @property
    def radii(self) -> np.ndarray:
        return self.channel_radius * self.nodes

    def __repr__(self):
        return f"LagrangeMesh(n_points={self.n_points}, channel_radius={self.channel_radius})"


def build_mesh(n_points: int, channel_radius: float) -> LagrangeMesh:
    """Build the ``N``-point shifted Gauss-Legendre mesh scaled to ``[0, a]``.

    Roots below 1/2 are refined by Newton's method on ``P_N(1 - 2x)``
    evaluated directly in ``x``, so the small nodes (and, by mirror symmetry,
    the small complements ``1 - x``) keep full relative precision.
    """
    if isinstance(n_points, bool) or int(n_points) != n_points or n_points < 1:
        raise InvalidArgumentError(f"n_points must be a positive integer, got {n_points!r}")
    if not np.isfinite(channel_radius) or channel_radius <= 0:
        raise InvalidArgumentError(f"channel radius must be positive, got {channel_radius!r}")
    n = int(n_points)
    a = float(channel_radius)

    # lower-half roots: y = x < 1/2, solved as zeros of P_N(1 - 2y)
    half = n // 2
    j = np.arange(1, half + 1)
    y = np.sin(np.pi * (4 * j - 1) / (4 * n + 2) / 2) ** 2
    for _ in range(_NEWTON_MAXITER):
        q, q_prev = _legendre_near_one(n, y)
        ymy = y * (1 - y)
        # P_N'(X) at X = 1 - 2y, and dq/dy = -2 P_N'
        dp = n * (q_prev - (1 - 2 * y) * q) / (4 * ymy)
        step = q / (2 * dp)
        y = y + step
        if np.all(np.abs(step) <= _NEWTON_TOL * y):
            break
    _, q_prev = _legendre_near_one(n, y)
    x_low = y
    y_low = 1 - y
    # lambda = (1 - X^2) / (N P_{N-1}(X))^2 at a root, with 1 - X^2 = 4 x (1 - x)
    w_low = 4 * x_low * y_low / (n * q_prev) ** 2

    if n % 2:
        _, p_mid_prev = legendre(n, np.array([0.0]))
        mid_x = np.array([0.5])
        mid_w = 1.0 / (n * p_mid_prev) ** 2
    else:
        mid_x = np.empty(0)
        mid_w = np.empty(0)

    nodes = np.concatenate([x_low, mid_x, y_low[::-1]])
    complements = np.concatenate([y_low, mid_x, x_low[::-1]])
    weights = np.concatenate([w_low, mid_w, w_low[::-1]])
    return LagrangeMesh(n, a, _readonly(nodes), _readonly(complements), _readonly(weights))


def _prefactors(mesh: LagrangeMesh) -> np.ndarray:
    n = mesh.n_points
    signs = (-1.0) ** (n - 1 - np.arange(n))
    # binom(2N, N) is the leading coefficient of P_N(2t - 1) in t
    return signs * np.sqrt(mesh.complements / mesh.nodes) * comb(2 * n, n) / np.sqrt(mesh.channel_radius)


def _check_domain(mesh: LagrangeMesh, r) -> np.ndarray:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    a = mesh.channel_radius
    if np.any(~np.isfinite(r)) or np.any(r < 0) or np.any(r > a * (1 + 1e-14)):
        raise OutOfDomainError(f"radius outside [0, {a}]")
    return r


def basis_matrix(mesh: LagrangeMesh, r) -> np.ndarray:
    """Values ``f_j(r_m)`` as an ``(len(r), N)`` array.

    ``r P_N(2r/a - 1) / (r - a x_j)`` is evaluated in product form,
    ``t * binom(2N, N) * prod_{k != j} (t - x_k)`` with ``t = r/a``, which has
    no removable singularity at the mesh points.
    """
    r = _check_domain(mesh, r)
    t = r / mesh.channel_radius
    diff = t[:, None] - mesh.nodes[None, :]
    n = mesh.n_points
    out = np.empty((t.size, n))
    for j in range(n):
        out[:, j] = t * np.prod(np.delete(diff, j, axis=1), axis=1)
    return out * _prefactors(mesh)[None, :]


def basis_eval(mesh: LagrangeMesh, i: int, r: float) -> float:
    """Lagrange function ``f_i(r)`` with a 1-based index ``i``."""
    if not 1 <= i <= mesh.n_points:
        raise InvalidArgumentError(f"basis index {i} outside 1..{mesh.n_points}")
    return float(basis_matrix(mesh, [r])[0, i - 1])


def basis_derivative_matrix(mesh: LagrangeMesh, r) -> np.ndarray:
    """Derivatives ``f_j'(r_m)`` as an ``(len(r), N)`` array."""
    r = _check_domain(mesh, r)
    t = r / mesh.channel_radius
    diff = t[:, None] - mesh.nodes[None, :]
    n = mesh.n_points
    out = np.empty((t.size, n))
    for j in range(n):
        rest = np.delete(diff, j, axis=1)
        # d/dt [t prod_k (t - x_k)] = prod_k (t - x_k) + t sum_m prod_{k != m} (t - x_k)
        total = np.prod(rest, axis=1)
        for m in range(n - 1):
            total = total + t * np.prod(np.delete(rest, m, axis=1), axis=1)
        out[:, j] = total
    return out * (_prefactors(mesh) / mesh.channel_radius)[None, :]


def gauss_integrate(mesh: LagrangeMesh, g) -> float:
    """``a * sum_k lambda_k g(a x_k)``; exact for polynomials of degree < 2N."""
    values = np.array([g(r) for r in mesh.radii])
    return mesh.channel_radius * float(np.dot(mesh.weights, values))
