import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypdel.angles import (
    PI, Psi, angles_from_theta, check_target, cone_angles, conformal_basis, conformal_move,
    edge_and_vertex_functionals, face_functionals, feasibility_bruteforce, formula_sett,
    psi_map, require_delaunay, vertex_sums,
)
from hypdel.errors import DimensionMismatch, NotDelaunay, TooLarge
from hypdel.sampling import random_complex, sample_interior_angles, starve_face

angle = st.floats(0.01, PI - 0.01)


def test_equilateral_face():
    ff = face_functionals([PI / 5] * 3)
    assert ff.sigma == pytest.approx(3 * PI / 5)
    assert ff.k == pytest.approx(-2 * PI / 5)
    assert np.allclose(ff.psi_corner, PI / 10)
    assert np.allclose(ff.theta_corner, 2 * PI / 5)


def test_psi_may_be_negative():
    ff = face_functionals([PI / 2, PI / 4, PI / 8])
    assert ff.sigma == pytest.approx(7 * PI / 8)
    assert ff.k == pytest.approx(-PI / 8)
    assert ff.psi_corner[0] == pytest.approx(-PI / 16)


@given(st.tuples(angle, angle, angle))
def test_theta_corner_identities(d):
    ff = face_functionals(d)
    a = np.asarray(d)
    # theta at a side equals its opposite angle minus half the curvature
    assert np.allclose(ff.theta_corner, a - ff.k / 2, atol=1e-13)
    assert np.allclose(ff.psi_corner + ff.theta_corner, PI / 2, atol=1e-13)
    assert np.allclose(angles_from_theta(ff.theta_corner), a, atol=1e-13)


def test_psi_corner_bound(rng):
    th = rng.uniform(0, PI, size=(1000, 3))
    th = th[th.sum(axis=1) < PI]
    ff = face_functionals(th)
    assert np.all(np.abs(ff.psi_corner) < PI / 2)


def test_symmetric_functionals(genus2):
    x = np.full(18, PI / 9)
    ev = edge_and_vertex_functionals(x, genus2)
    assert np.allclose(ev.psi_e, PI / 9)
    assert np.allclose(ev.theta_e, 8 * PI / 9)
    assert ev.r_v[0] == pytest.approx(2 * PI)


def test_tetrahedron_functionals(tet):
    x = np.full(12, PI / 5)
    ev = edge_and_vertex_functionals(x, tet)
    assert np.allclose(ev.psi_e, PI / 5)
    assert np.allclose(ev.r_v, 3 * PI / 5)


def test_dimension_checks(genus2):
    with pytest.raises(DimensionMismatch):
        Psi(np.zeros(17), genus2)
    with pytest.raises(DimensionMismatch):
        check_target(np.zeros(8), genus2)
    with pytest.raises(DimensionMismatch):
        conformal_move(np.zeros(18), np.zeros(8), genus2)


def test_conformal_basis_kernel_and_rank(genus2, two_vertex):
    for c in (genus2, two_vertex):
        W = conformal_basis(c).toarray()
        P = psi_map(c).toarray()
        assert np.abs(P @ W).max() == 0.0
        assert np.linalg.matrix_rank(W) == c.edge_count
        assert np.linalg.matrix_rank(P) == c.edge_count
        # w_e sums to zero around every vertex
        for e in range(c.edge_count):
            assert np.abs(vertex_sums(W[:, e], c)).max() < 1e-15


def test_conformal_basis_entries(genus2):
    W = conformal_basis(genus2).toarray()
    for e in range(genus2.edge_count):
        (f1, s1), (f2, s2) = genus2.edge_sides[e]
        col = W[:, e].reshape(-1, 3)
        expect = np.zeros((6, 3))
        for f, s, sign in ((f1, s1, 0.5), (f2, s2, -0.5)):
            expect[f, (s + 1) % 3] += sign
            expect[f, (s + 2) % 3] += sign
        assert np.array_equal(col, expect)


def test_conformal_move_zero_is_identity(genus2, rng):
    x = rng.uniform(0.1, 1.0, 18)
    assert np.array_equal(conformal_move(x, np.zeros(9), genus2), x)


def test_conformal_invariance(rng):
    for seed in range(20):
        c = random_complex(np.random.default_rng(seed), 6 + 2 * (seed % 4))
        x = rng.normal(size=3 * c.face_count)
        b = rng.normal(size=c.edge_count)
        y = conformal_move(x, b, c)
        assert np.abs(Psi(y, c) - Psi(x, c)).max() <= 1e-12
        assert np.abs(vertex_sums(y, c) - vertex_sums(x, c)).max() <= 1e-12


def test_check_target_symmetric(genus2):
    chk = check_target(np.full(9, PI / 9), genus2)
    assert chk.delaunay and chk.nonsingular
    assert chk.cone_angles[0] == pytest.approx(2 * PI, abs=1e-12)


def test_check_target_boundary(genus2):
    p = np.full(9, PI / 9)
    p[3] = PI
    chk = check_target(p, genus2)
    assert not chk.delaunay and chk.bad_edges == (3,)
    with pytest.raises(NotDelaunay):
        require_delaunay(p, genus2)


def test_cone_angle_identity(rng):
    for seed in range(20):
        c = random_complex(np.random.default_rng(seed), 8 + 2 * (seed % 3))
        x = rng.normal(size=3 * c.face_count)
        assert np.abs(cone_angles(Psi(x, c), c) - vertex_sums(x, c)).max() <= 1e-12


def test_bruteforce_symmetric(genus2):
    res = feasibility_bruteforce(np.full(9, PI / 9), genus2)
    assert res.feasible and res.witness is None and res.margin > 0
    # the full set: 9 edges of theta 8 pi/9 against 6 pi
    assert res.margin <= 8 * PI - 6 * PI


def test_one_vertex_nonsingular_always_feasible(genus2, rng):
    for _ in range(50):
        p = rng.dirichlet(np.ones(9)) * PI  # cone angle 2 sum(p) = 2 pi
        if np.any(p <= 0):
            continue
        assert check_target(p, genus2).nonsingular
        assert feasibility_bruteforce(p, genus2).feasible


def test_starved_face_singleton_witness(two_vertex, rng):
    x = sample_interior_angles(two_vertex, rng)
    p = starve_face(Psi(x, two_vertex), two_vertex, 0)
    res = feasibility_bruteforce(p, two_vertex)
    assert not res.feasible
    theta = PI - p
    edges = set(two_vertex.side_edge[0].tolist())
    assert sum(theta[e] for e in edges) <= PI
    # the reported witness violates the inequality as well
    touched = {int(e) for f in res.witness for e in two_vertex.side_edge[f]}
    assert sum(theta[e] for e in touched) <= PI * len(res.witness)


def test_bruteforce_limit(rng):
    c = random_complex(rng, 22)
    with pytest.raises(TooLarge):
        feasibility_bruteforce(np.full(c.edge_count, 1.0), c)


def test_formula_sett_full_set(genus2, rng):
    x = rng.uniform(0.05, 1.0, 18)
    r = formula_sett(x, range(6), genus2)
    assert abs(r.lhs - r.rhs) <= 1e-12


def test_formula_sett_single_face(two_vertex):
    x = np.full(24, PI / 5)
    r = formula_sett(x, [0], two_vertex)
    assert r.lhs == pytest.approx(r.rhs, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_formula_sett_random(seed):
    rng = np.random.default_rng(seed)
    c = random_complex(rng, int(rng.choice([6, 8, 10])))
    x = rng.uniform(-0.5, 2.0, 3 * c.face_count)
    S = np.flatnonzero(rng.random(c.face_count) < 0.5)
    r = formula_sett(x, S, c)
    assert abs(r.lhs - r.rhs) <= 1e-12
