import numpy as np
import pytest

from hypdel import hyperbolic as hyp
from hypdel.angles import PI, Psi, angles_from_theta, corner_margin, face_functionals
from hypdel.complex import dual_spanning_tree
from hypdel.errors import DegenerateCircle, NotCertified
from hypdel.realize import (
    _one_sided_angle, build_prisms, canonical_face, circumcircle_angles, develop,
    developed_corner_angles, euclidean_circumcircle, holonomy_report, layout_side_lengths,
    prism_from_hyperboloid, top_face_angles,
)
from hypdel.sampling import round_trip_instance, sample_theta_corners
from hypdel.uniformize import uniformize
from hypdel.volume import triangle_lengths

LENGTH_PI_9 = 3.43821424123010309189703955975


@pytest.fixture
def symmetric(genus2):
    return uniformize(np.full(9, PI / 9), genus2)


def on_hyperboloid(X):
    return np.allclose(hyp.minkowski(X, X), -1.0, rtol=1e-12) and np.all(X[..., 0] > 0)


def test_symmetric_layout(genus2, symmetric):
    L = develop(symmetric, genus2)
    assert on_hyperboloid(L.coords.astype(float))
    assert np.abs(layout_side_lengths(L) - LENGTH_PI_9).max() <= 1e-9
    assert np.abs(developed_corner_angles(L) - PI / 9).max() <= 1e-12


def test_tree_faces_share_vertices_exactly(genus2, symmetric):
    L = develop(symmetric, genus2)
    for arc in L.tree.arcs:
        s, t = arc.parent_side, arc.child_side
        P, C = L.coords[arc.parent], L.coords[arc.child]
        assert np.array_equal(C[(t + 1) % 3], P[(s + 2) % 3])
        assert np.array_equal(C[(t + 2) % 3], P[(s + 1) % 3])


def test_pair_of_equilateral_faces(genus2, symmetric):
    # two pi/5 triangles across one edge, checked in isolation
    d = np.full(3, PI / 5)
    l = triangle_lengths(d)
    A = canonical_face(d, l)
    from hypdel.realize import _place
    _, B = _place(A, 0, canonical_face(d, l), 2)
    assert np.array_equal(B[0], A[2]) and np.array_equal(B[1], A[1])
    z = hyp.to_poincare(np.vstack([A, B]))
    P, Q = z[1], z[2]
    total = _one_sided_angle(P, Q, z[0]) + _one_sided_angle(P, Q, z[5])
    assert total == pytest.approx(4 * PI / 5, abs=1e-12)


def test_layout_deterministic(genus2, symmetric):
    a, b = develop(symmetric, genus2), develop(symmetric, genus2)
    assert np.array_equal(a.coords, b.coords)


def test_develop_rejects_uncertified(genus2, symmetric):
    x = symmetric.angles.copy()
    x[0] += 1e-3
    x[1] -= 1e-3
    with pytest.raises(NotCertified):
        develop(x, genus2)
    with pytest.raises(NotCertified):
        develop(np.full(18, PI / 3), genus2)


def test_isometry_equivariance(rng):
    c, _, p = round_trip_instance(rng, 14)
    u = uniformize(p, c)
    g = hyp.rotation(0.7) @ hyp.translation_x(0.4) @ hyp.rotation(-1.9)
    tree = dual_spanning_tree(c, 0)
    a = develop(u, c, tree)
    b = develop(u, c, tree, root_frame=g)
    moved = a.coords @ g.astype(np.longdouble).T
    scale = np.abs(a.coords).max(axis=-1, keepdims=True)
    assert float((np.abs(moved - b.coords) / scale).max()) <= 1e-12


def test_symmetric_holonomy(genus2, symmetric):
    h = holonomy_report(develop(symmetric, genus2), symmetric, genus2)
    assert abs(h.vertex_totals[0] - 2 * PI) <= 1e-9
    assert max(h.edge_mismatch.values()) <= 1e-9
    again = holonomy_report(develop(symmetric, genus2), symmetric, genus2)
    assert np.array_equal(h.vertex_defects, again.vertex_defects)


def test_singular_cone_holonomy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        c, x, _ = round_trip_instance(rng, 10)
        corners = np.flatnonzero(c.corner_vertex.ravel() == 1)
        y = x.copy()
        y[corners] *= 1.5 * PI / x[corners].sum()
        if corner_margin(y) > 0.01:
            break
    u = uniformize(Psi(y, c), c)
    h = holonomy_report(develop(u, c), u, c)
    assert h.vertex_totals[1] == pytest.approx(1.5 * PI, abs=1e-8)
    assert np.abs(h.vertex_defects).max() <= 1e-8


def test_symmetric_circumcircle_angles(genus2, symmetric):
    ang = circumcircle_angles(develop(symmetric, genus2), genus2)
    assert np.allclose(ang, 8 * PI / 9, atol=1e-12)


def test_circumcircle_round_trips():
    for seed in range(10):
        c, _, p = round_trip_instance(np.random.default_rng(seed), 6 + 4 * seed)
        L = develop(uniformize(p, c), c)
        ang, sides = circumcircle_angles(L, c, one_sided=True)
        assert np.abs(ang - (PI - p)).max() <= 1e-8
        # one-sided values equal the theta-corners of the faces
        th = face_functionals(L.angles).theta_corner
        for e in range(c.edge_count):
            (f1, s1), (f2, s2) = c.edge_sides[e]
            assert sides[e, 0] == pytest.approx(th[f1, s1], abs=1e-8)
            assert sides[e, 1] == pytest.approx(th[f2, s2], abs=1e-8)


def test_one_sided_angle_collinear_fallback():
    # R on the geodesic through P and Q (a diameter): the "circle" is that line.
    # Limits of (pi + A - B - C)/2: R inside the segment has A = pi, outside it A = 0
    # and the far endpoint's angle is pi
    P, Q = -0.3 + 0j, 0.5 + 0j
    assert _one_sided_angle(P, Q, 0.2 + 0j) == pytest.approx(PI, abs=1e-12)
    assert _one_sided_angle(P, Q, 0.8 + 0j) == pytest.approx(0.0, abs=1e-12)
    assert _one_sided_angle(P, Q, -0.6 + 0j) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DegenerateCircle):
        _one_sided_angle(P, Q, P)


def test_euclidean_circumcircle():
    z = np.exp(1j * np.array([0.1, 1.7, 4.0])) * 0.3 + (0.1 - 0.2j)
    centre, r = euclidean_circumcircle(z)
    assert centre == pytest.approx(0.1 - 0.2j) and r == pytest.approx(0.3)
    assert euclidean_circumcircle(np.array([0, 0.1, 0.2])) is None


def test_equilateral_prism():
    d = np.full(3, PI / 5)
    pr = prism_from_hyperboloid(canonical_face(d, triangle_lengths(d)))
    assert np.allclose(pr.vertical_dihedrals, PI / 5, atol=1e-12)
    assert np.allclose(pr.top_dihedrals, 2 * PI / 5, atol=1e-12)
    assert np.allclose(pr.bottom_dihedrals, 2 * PI / 5, atol=1e-12)


def test_prism_points(rng):
    for th in sample_theta_corners(20, rng):
        d = angles_from_theta(th)
        X = canonical_face(d, triangle_lengths(d))
        pr = prism_from_hyperboloid(X)
        assert np.allclose(np.linalg.norm(pr.upper, axis=1), 1.0, atol=1e-14)
        assert np.allclose(pr.lower, pr.upper * [1, 1, -1])
        # the corner at the origin lifts to the poles
        assert np.array_equal(pr.upper[0], [0.0, 0.0, 1.0])


def test_prism_dihedrals_random(rng):
    for th in sample_theta_corners(100, rng):
        d = angles_from_theta(th)
        pr = prism_from_hyperboloid(canonical_face(d, triangle_lengths(d)))
        assert np.abs(pr.vertical_dihedrals - d).max() <= 1e-9
        assert np.abs(pr.top_dihedrals - th).max() <= 1e-9
        assert np.abs(pr.bottom_dihedrals - th).max() <= 1e-9


def test_prisms_over_layout(genus2, symmetric):
    L = develop(symmetric, genus2)
    prisms = build_prisms(L)
    assert len(prisms) == 6
    for pr in prisms:
        assert np.abs(pr.vertical_dihedrals - PI / 9).max() <= 1e-9
    assert np.allclose(top_face_angles(L, genus2), 8 * PI / 9, atol=1e-10)


def test_top_faces_meet_at_theta():
    c, _, p = round_trip_instance(np.random.default_rng(2), 16)
    L = develop(uniformize(p, c), c)
    assert np.abs(top_face_angles(L, c) - (PI - p)).max() <= 1e-8
