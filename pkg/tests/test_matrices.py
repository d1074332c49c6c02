import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rmatrix_siegert import (
    InvalidArgumentError,
    OutOfDomainError,
    SingularPotentialError,
    SingularUpdateError,
    bargmann,
    constant,
    zero,
)
from rmatrix_siegert.matrices import (
    RankOneSymmetric,
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
from rmatrix_siegert.mesh import basis_derivative_matrix, basis_matrix, build_mesh
from rmatrix_siegert.oracles import BargmannParams, bargmann_potential

from reference_values import SYMBOLIC_KINETIC_N2_A1


def _fine_quadrature(a, points=500):
    t, w = np.polynomial.legendre.leggauss(points)
    return a * (t + 1) / 2, a * w / 2


def test_gauss_overlap_is_identity():
    assert np.array_equal(overlap_matrix(build_mesh(7, 2.0), gauss_approx=True), np.eye(7))


def test_exact_overlap_diagonal():
    n = 9
    mesh = build_mesh(n, 2.0)
    ov = overlap_matrix(mesh, gauss_approx=False)
    x = mesh.nodes
    assert np.diag(ov) == pytest.approx(1 + (1 - x) / x / (2 * n + 1), rel=1e-14)


def test_exact_overlap_matches_fine_quadrature():
    n, a = 10, 3.0
    mesh = build_mesh(n, a)
    r, w = _fine_quadrature(a)
    f = basis_matrix(mesh, r)
    brute = (f * w[:, None]).T @ f
    assert np.max(np.abs(overlap_matrix(mesh, gauss_approx=False) - brute)) < 1e-10


@pytest.mark.parametrize("n", [5, 10, 25])
def test_exact_overlap_rank_one_form(n):
    mesh = build_mesh(n, 5.0)
    m = overlap_rank_one(mesh)
    assert m.alpha == pytest.approx(n**2 / (2 * n + 1), rel=1e-15)
    assert abs(np.linalg.norm(m.u) - 1) < 1e-13
    assert np.max(np.abs(m.dense() - overlap_matrix(mesh, gauss_approx=False))) < 1e-11
    eig = np.linalg.eigvalsh(overlap_matrix(mesh, gauss_approx=False) - np.eye(n))
    assert abs(eig[-1] - m.alpha) < 1e-10
    assert np.max(np.abs(eig[:-1])) < 1e-10


def test_kinetic_diagonal_closed_form():
    n, a = 11, 4.0
    mesh = build_mesh(n, a)
    x = mesh.nodes
    expected = (4 * n * (n + 1) + 3 + (1 - 6 * x) / (x * (1 - x))) / (6 * a**2 * x * (1 - x))
    assert np.diag(kinetic_bloch_matrix(mesh)) == pytest.approx(expected, rel=1e-12)


def test_kinetic_two_point_symbolic():
    assert kinetic_bloch_matrix(build_mesh(2, 1.0)) == pytest.approx(np.array(SYMBOLIC_KINETIC_N2_A1), rel=1e-13)


@pytest.mark.parametrize("n,a", [(5, 1.0), (25, 5.0), (40, 6.0)])
def test_kinetic_matches_derivative_gram(n, a):
    mesh = build_mesh(n, a)
    d = basis_derivative_matrix(mesh, mesh.radii)
    gram = 0.5 * a * (d * mesh.weights[:, None]).T @ d
    t = kinetic_bloch_matrix(mesh)
    assert np.max(np.abs(gram - t)) < 1e-10 * max(1.0, np.max(np.abs(t)) / 1e3)


def test_kinetic_symmetric():
    t = kinetic_bloch_matrix(build_mesh(30, 5.0))
    assert np.array_equal(t, t.T) or np.max(np.abs(t - t.T)) < 1e-12 * np.max(np.abs(t))


def test_potential_matrix_cases():
    mesh = build_mesh(8, 5.0)
    assert np.array_equal(potential_matrix(mesh, zero()), np.zeros((8, 8)))
    assert potential_matrix(mesh, constant(-2.5)) == pytest.approx(-2.5 * np.eye(8))
    p = BargmannParams(2, -1)
    expected = [bargmann_potential(p, r) for r in mesh.radii]
    assert np.diag(potential_matrix(mesh, bargmann(2, -1))) == pytest.approx(expected, rel=1e-15)


def test_potential_matrix_rejects_non_finite():
    with pytest.raises(SingularPotentialError):
        potential_matrix(build_mesh(4, 1.0), lambda r: np.inf if r > 0.5 else 0.0)


def test_centrifugal_matrix():
    mesh = build_mesh(10, 5.0)
    assert np.array_equal(centrifugal_matrix(mesh, 0), np.zeros((10, 10)))
    d = np.diag(centrifugal_matrix(mesh, 1))
    assert d == pytest.approx(1 / (25 * mesh.nodes**2), rel=1e-14)
    assert np.all(np.diff(d) < 0)
    with pytest.raises(InvalidArgumentError):
        centrifugal_matrix(mesh, -1)


def test_surface_values_match_surface_term():
    n, a = 12, 5.0
    mesh = build_mesh(n, a)
    f = surface_values(mesh)
    x, y = mesh.nodes, mesh.complements
    i = np.arange(n)
    term = (-1.0) ** (i[:, None] + i[None, :]) / a**2 / np.sqrt(np.outer(x * y, x * y))
    assert np.outer(f, f) / a == pytest.approx(term, rel=1e-12)


def test_assembled_system_invariants():
    sys = assemble_system(build_mesh(25, 5.0), bargmann(2, -1), l=0, gauss_overlap=False)
    assert np.array_equal(sys.c0, sys.c0.T)
    assert np.array_equal(sys.overlap, sys.overlap.T)
    assert sys.n_points == 25 and sys.short_range and not sys.gauss_overlap_used


def test_assembled_system_rejects_bad_l():
    with pytest.raises(InvalidArgumentError):
        assemble_system(build_mesh(4, 1.0), zero(), l=-1)


def test_assemble_C_boundary_zero_and_real():
    sys = assemble_system(build_mesh(10, 5.0), bargmann(2, -1))
    assert assemble_C(sys, 0) is sys.c0
    c = assemble_C(sys, 1.7)
    assert np.allclose(c, c.conj().T)


def test_assemble_C_shift_is_rank_one_surface_term():
    a = 5.0
    mesh = build_mesh(10, a)
    sys = assemble_system(mesh, bargmann(2, -1))
    b = 0.3 - 1.2j
    delta = assemble_C(sys, b) - assemble_C(sys, 0)
    x, y = mesh.nodes, mesh.complements
    i = np.arange(10)
    term = (-1.0) ** (i[:, None] + i[None, :]) / a**2 / np.sqrt(np.outer(x * y, x * y))
    assert delta == pytest.approx(-(b / (2 * a)) * term * a, rel=1e-12)
    sv = np.linalg.svd(delta, compute_uv=False)
    assert sv[1] / sv[0] < 1e-12


def test_sherman_morrison_zero_update():
    b_inv = np.linalg.inv(np.diag([1.0, 2.0, 3.0]))
    assert np.array_equal(sherman_morrison_inverse(b_inv, np.zeros(3), np.ones(3)), b_inv)


def test_sherman_morrison_random_8x8(rng):
    b = rng.normal(size=(8, 8)) + 8 * np.eye(8)
    u, v = rng.normal(size=8), rng.normal(size=8)
    inv = sherman_morrison_inverse(np.linalg.inv(b), u, v)
    assert np.max(np.abs(inv @ (b + np.outer(u, v)) - np.eye(8))) < 1e-10


def test_sherman_morrison_fifty_instances(rng):
    for _ in range(50):
        n = int(rng.integers(2, 12))
        b = rng.normal(size=(n, n)) + n * np.eye(n)
        u, v = rng.normal(size=n), rng.normal(size=n)
        ref = np.linalg.inv(b + np.outer(u, v))
        got = sherman_morrison_inverse(np.linalg.inv(b), u, v)
        assert np.max(np.abs(got - ref)) / np.max(np.abs(ref)) < 1e-9


def test_sherman_morrison_vector_form(rng):
    b = rng.normal(size=(6, 6)) + 6 * np.eye(6)
    u, v = rng.normal(size=6), rng.normal(size=6)
    ref = np.linalg.solve(b + np.outer(u, v), u)
    assert sherman_morrison_vector(np.linalg.inv(b), u, v) == pytest.approx(ref, rel=1e-11)


def test_sherman_morrison_scalar_identity_spd(rng):
    for _ in range(20):
        m = rng.normal(size=(7, 7))
        b = m @ m.T + 7 * np.eye(7)
        u = rng.normal(size=7)
        b_inv = np.linalg.inv(b)
        lhs = 1 / (u @ np.linalg.solve(b + np.outer(u, u), u))
        rhs = 1 + 1 / (u @ b_inv @ u)
        assert abs(lhs - rhs) / abs(rhs) < 1e-12
        assert sherman_morrison_scalar(b_inv, u, u) == pytest.approx(1 / rhs, rel=1e-12)


def test_sherman_morrison_singular_update():
    b_inv = np.eye(2)
    u = np.array([1.0, 0.0])
    v = np.array([-1.0, 0.0])
    with pytest.raises(SingularUpdateError):
        sherman_morrison_inverse(b_inv, u, v)
    with pytest.raises(SingularUpdateError):
        sherman_morrison_vector(b_inv, u, v)


def test_rank_one_requires_unit_vector():
    with pytest.raises(InvalidArgumentError):
        RankOneSymmetric(1.0, np.array([1.0, 1.0]))


def test_rank_one_powers():
    m = overlap_rank_one(build_mesh(25, 5.0))
    assert rank_one_power(m, 1).alpha == pytest.approx(m.alpha, rel=1e-15)
    inv = rank_one_power(m, -1).dense()
    assert np.max(np.abs(m.dense() @ inv - np.eye(25))) < 1e-12
    half = rank_one_power(m, 0.5).dense()
    assert np.max(np.abs(half @ half - m.dense())) < 1e-12
    twice = rank_one_power(rank_one_power(m, 0.5), 2.0)
    assert twice.alpha == pytest.approx(m.alpha, rel=1e-13)


def test_rank_one_power_domain():
    u = np.array([1.0, 0.0])
    with pytest.raises(OutOfDomainError):
        rank_one_power(RankOneSymmetric(-2.0, u), 0.5)
    assert rank_one_power(RankOneSymmetric(-2.0, u), 2).alpha == pytest.approx(0.0)
    with pytest.raises(SingularUpdateError):
        rank_one_power(RankOneSymmetric(-1.0, u), -1)


def test_rank_one_apply_matches_dense(rng):
    u = rng.normal(size=9)
    m = RankOneSymmetric(2.3, u / np.linalg.norm(u))
    v = rng.normal(size=(9, 4))
    assert m.apply(v) == pytest.approx(m.dense() @ v, rel=1e-13)
    assert m.apply(v[:, 0]) == pytest.approx(m.dense() @ v[:, 0], rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(
    diag=arrays(np.float64, 6, elements=st.floats(1.0, 10.0)),
    u=arrays(np.float64, 6, elements=st.floats(-2.0, 2.0)),
    v=arrays(np.float64, 6, elements=st.floats(-2.0, 2.0)),
)
def test_sherman_morrison_property(diag, u, v):
    b = np.diag(diag)
    denom = 1 + v @ (u / diag)
    if abs(denom) < 1e-3:
        return
    got = sherman_morrison_inverse(np.diag(1 / diag), u, v)
    assert np.max(np.abs(got @ (b + np.outer(u, v)) - np.eye(6))) < 1e-9 / min(1.0, abs(denom))


@settings(max_examples=50, deadline=None)
@given(alpha=st.floats(-0.99, 50.0), p=st.floats(-3.0, 3.0), q=st.floats(-3.0, 3.0))
def test_rank_one_power_composition(alpha, p, q):
    u = np.array([0.6, 0.8])
    m = RankOneSymmetric(alpha, u)
    composed = rank_one_power(rank_one_power(m, p), q)
    direct = rank_one_power(m, p * q)
    assert composed.alpha == pytest.approx(direct.alpha, rel=1e-9, abs=1e-12)
