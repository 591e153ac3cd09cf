import numpy as np
import pytest

from hypdel.angles import PI, Psi, corner_margin, face_functionals, feasibility_bruteforce
from hypdel.complex import relabel_faces
from hypdel.errors import NotDelaunay
from hypdel.feasibility import fibre_residual, initial_plus_point, margin_lp
from hypdel.sampling import random_complex, random_psi, sample_interior_angles, starve_face


def test_initial_point_symmetric(genus2):
    x = initial_plus_point(np.full(9, PI / 9), genus2)
    assert np.allclose(x, PI / 9, atol=1e-15)
    ff = face_functionals(x.reshape(-1, 3))
    assert np.allclose(ff.theta_corner, 4 * PI / 9)


def test_initial_point_in_fibre(rng):
    for seed in range(100):
        c = random_complex(np.random.default_rng(seed), 6 + 2 * (seed % 5))
        p = random_psi(c, rng)
        x = initial_plus_point(p, c)
        assert fibre_residual(x, p, c) <= 1e-13
        assert np.all((x > 0) & (x < PI))
        th = face_functionals(x.reshape(-1, 3)).theta_corner
        assert np.all((th > 0) & (th < PI))


def test_initial_point_flags_starved_face(two_vertex, rng):
    p = starve_face(Psi(sample_interior_angles(two_vertex, rng), two_vertex), two_vertex, 0)
    x = initial_plus_point(p, two_vertex)
    assert face_functionals(x.reshape(-1, 3)).k[0] >= 0


def test_margin_lp_symmetric(genus2):
    res = margin_lp(np.full(9, PI / 9), genus2)
    assert res.status == "feasible"
    assert res.epsilon_star >= PI / 9 - 1e-12
    assert fibre_residual(res.x_star, np.full(9, PI / 9), genus2) <= 1e-12


def test_margin_lp_infeasible(two_vertex, rng):
    p = starve_face(Psi(sample_interior_angles(two_vertex, rng), two_vertex), two_vertex, 0)
    res = margin_lp(p, two_vertex)
    assert res.status == "infeasible" and res.epsilon_star < 0
    assert not feasibility_bruteforce(p, two_vertex).feasible


def test_margin_lp_rejects_non_delaunay(genus2):
    p = np.full(9, PI / 9)
    p[0] = 3.2
    with pytest.raises(NotDelaunay):
        margin_lp(p, genus2)


def test_warm_start_validity(rng):
    for seed in range(20):
        r = np.random.default_rng(seed)
        c = random_complex(r, int(r.choice([8, 12, 16, 20])))
        p = Psi(sample_interior_angles(c, r), c)
        res = margin_lp(p, c)
        assert res.feasible
        assert fibre_residual(res.x_star, p, c) <= 1e-9
        assert corner_margin(res.x_star) >= res.epsilon_star / 2


def test_permutation_invariance(rng):
    c = random_complex(rng, 10)
    p = Psi(sample_interior_angles(c, rng), c)
    perm = rng.permutation(c.face_count)
    c2 = relabel_faces(c, perm)
    # relabeling faces keeps the gluing order, so edge indices are unchanged
    assert margin_lp(p, c2).epsilon_star == pytest.approx(margin_lp(p, c).epsilon_star, abs=1e-9)


def test_lp_agrees_with_bruteforce(rng):
    checked = 0
    for seed in range(40):
        r = np.random.default_rng(1000 + seed)
        c = random_complex(r, int(r.choice([6, 8, 10])))
        p = random_psi(c, r)
        bf = feasibility_bruteforce(p, c)
        if abs(bf.margin) < 1e-6:
            continue
        assert margin_lp(p, c).feasible == bf.feasible
        checked += 1
    assert checked >= 30
