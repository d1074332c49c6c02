import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmatrix_siegert import InvalidArgumentError, OutOfDomainError
from rmatrix_siegert.mesh import (
    basis_derivative_matrix,
    basis_eval,
    basis_matrix,
    build_mesh,
    gauss_integrate,
    legendre,
)


def test_single_point_mesh():
    mesh = build_mesh(1, 3.0)
    assert mesh.nodes.tolist() == [0.5]
    assert mesh.weights.tolist() == pytest.approx([1.0], abs=1e-15)


def test_two_point_mesh_closed_form():
    mesh = build_mesh(2, 1.0)
    expected = [(3 - math.sqrt(3)) / 6, (3 + math.sqrt(3)) / 6]
    assert mesh.nodes == pytest.approx(expected, abs=1e-15)
    assert mesh.weights == pytest.approx([0.5, 0.5], abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 10, 25, 40, 60, 100])
def test_mesh_invariants(n):
    mesh = build_mesh(n, 5.0)
    p, _ = legendre(n, 2 * mesh.nodes - 1)
    assert np.max(np.abs(p)) < 1e-13
    assert np.all(np.diff(mesh.nodes) > 0)
    assert 0 < mesh.nodes[0] and mesh.nodes[-1] < 1
    assert abs(mesh.weights.sum() - 1) < 1e-13
    assert np.max(np.abs(mesh.nodes + mesh.nodes[::-1] - 1)) < 1e-13
    assert np.max(np.abs(mesh.weights - mesh.weights[::-1])) < 1e-13
    assert np.all(mesh.weights > 0)


@pytest.mark.parametrize("n", [7, 25, 60])
def test_nodes_and_weights_against_multiprecision(n):
    mp.mp.dps = 30
    mesh = build_mesh(n, 1.0)
    for i in (0, n // 2, n - 1):
        x = mp.findroot(lambda t: mp.legendre(n, 2 * t - 1), mp.mpf(mesh.nodes[i]), solver="newton")
        assert abs(float((mesh.nodes[i] - x) / x)) < 1e-15
        assert abs(float((mesh.complements[i] - (1 - x)) / (1 - x))) < 1e-14
        dp = mp.diff(lambda t: mp.legendre(n, t), 2 * x - 1)
        w = 1 / (4 * x * (1 - x) * dp**2)
        assert abs(float((mesh.weights[i] - w) / w)) < 1e-13


def test_mesh_is_read_only():
    mesh = build_mesh(5, 1.0)
    with pytest.raises(ValueError):
        mesh.nodes[0] = 0.1
    with pytest.raises(AttributeError):
        mesh.n_points = 6


@pytest.mark.parametrize("n,a", [(0, 1.0), (-2, 1.0), (5, 0.0), (5, -1.0)])
def test_build_mesh_rejects_bad_arguments(n, a):
    with pytest.raises(InvalidArgumentError):
        build_mesh(n, a)


@pytest.mark.parametrize("n", [5, 25, 60])
def test_lagrange_conditions(n):
    a = 4.0
    mesh = build_mesh(n, a)
    f = basis_matrix(mesh, mesh.radii)
    scaled = f.T * np.sqrt(a * mesh.weights)[:, None]
    assert np.max(np.abs(scaled - np.eye(n))) < 1e-12


def test_basis_vanishes_at_origin():
    mesh = build_mesh(12, 5.0)
    assert np.all(basis_matrix(mesh, [0.0]) == 0.0)


def test_basis_value_at_channel_radius():
    n, a = 12, 5.0
    mesh = build_mesh(n, a)
    i = np.arange(1, n + 1)
    expected = (-1.0) ** (n - i) / np.sqrt(a * mesh.nodes * mesh.complements)
    assert basis_matrix(mesh, [a])[0] == pytest.approx(expected, rel=1e-12)


def test_basis_eval_at_mesh_point_is_the_limit():
    n, a = 10, 3.0
    mesh = build_mesh(n, a)
    i = 4
    r0 = mesh.radii[i - 1]
    target = 1 / math.sqrt(a * mesh.weights[i - 1])
    assert basis_eval(mesh, i, r0) == pytest.approx(target, rel=1e-13)
    for eps in (1e-4, 1e-7, 1e-10):
        assert basis_eval(mesh, i, r0 + eps) == pytest.approx(target, rel=1e-2 * eps / 1e-4 + 1e-12)
        assert basis_eval(mesh, i, r0 - eps) == pytest.approx(target, rel=1e-2 * eps / 1e-4 + 1e-12)


def test_basis_matches_legendre_quotient_away_from_nodes():
    n, a = 9, 2.0
    mesh = build_mesh(n, a)
    r = np.array([0.13, 0.77, 1.41, 1.93])
    p, _ = legendre(n, 2 * r / a - 1)
    i = np.arange(1, n + 1)
    pref = (-1.0) ** (n - i) / math.sqrt(a) * np.sqrt(mesh.complements / mesh.nodes)
    direct = pref[None, :] * (r * p)[:, None] / (r[:, None] - a * mesh.nodes[None, :])
    assert basis_matrix(mesh, r) == pytest.approx(direct, rel=1e-11, abs=1e-13)


def test_basis_derivative_matches_finite_difference():
    mesh = build_mesh(8, 2.5)
    r = np.array([0.3, 1.1, 2.2])
    h = 1e-6
    fd = (basis_matrix(mesh, r + h) - basis_matrix(mesh, r - h)) / (2 * h)
    assert basis_derivative_matrix(mesh, r) == pytest.approx(fd, rel=1e-7, abs=1e-7)


@pytest.mark.parametrize("r", [-1e-3, 5.001, float("nan")])
def test_basis_out_of_domain(r):
    mesh = build_mesh(5, 5.0)
    with pytest.raises(OutOfDomainError):
        basis_eval(mesh, 1, r)


@pytest.mark.parametrize("i", [0, 6])
def test_basis_index_range(i):
    with pytest.raises(InvalidArgumentError):
        basis_eval(build_mesh(5, 5.0), i, 1.0)


def test_gauss_integrate_constant():
    assert gauss_integrate(build_mesh(25, 5.0), lambda r: 1.0) == pytest.approx(5.0, rel=1e-14)


@pytest.mark.parametrize("n", [1, 4, 13, 25])
def test_gauss_integrate_exact_through_degree_2n_minus_1(n):
    a = 1.3
    mesh = build_mesh(n, a)
    for m in range(2 * n):
        exact = a ** (m + 1) / (m + 1)
        assert gauss_integrate(mesh, lambda r: r**m) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_gauss_integrate_not_exact_at_degree_2n(n):
    a = 1.0
    mesh = build_mesh(n, a)
    exact = a ** (2 * n + 1) / (2 * n + 1)
    assert abs(gauss_integrate(mesh, lambda r: r ** (2 * n)) - exact) > 1e-14


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 40), a=st.floats(0.1, 20.0), m=st.integers(0, 79))
def test_gauss_rule_property(n, a, m):
    mesh = build_mesh(n, a)
    value = gauss_integrate(mesh, lambda r: (r / a) ** m)
    exact = a / (m + 1)
    if m <= 2 * n - 1:
        assert value == pytest.approx(exact, rel=1e-12)
    else:
        # the Gauss rule underestimates even-order monomials beyond its degree
        assert value < exact * (1 + 1e-13)
