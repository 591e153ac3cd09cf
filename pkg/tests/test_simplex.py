import numpy as np
import pytest
from scipy.optimize import linprog

from hypdel.simplex import simplex


def test_textbook_lp():
    # maximize 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    res = simplex([3, 5], A_ub=[[1, 0], [0, 2], [3, 2]], b_ub=[4, 12, 18])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(36)
    assert res.x == pytest.approx([2, 6])


def test_infeasible():
    res = simplex([1, 1], A_ub=[[1, 1]], b_ub=[-1])
    assert res.status == "infeasible"


def test_unbounded():
    res = simplex([1, 0], A_ub=[[-1, 1]], b_ub=[1])
    assert res.status == "unbounded"


def test_equality_rows():
    res = simplex([1, 2, 0], A_eq=[[1, 1, 1]], b_eq=[1])
    assert res.status == "optimal"
    assert res.x == pytest.approx([0, 1, 0])


def test_degenerate_cycling_example():
    # Beale's example cycles under the largest-coefficient rule
    c = [0.75, -150, 0.02, -6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    res = simplex(c, A_ub=A, b_ub=b)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(0.05)


@pytest.mark.parametrize("seed", range(30))
def test_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    n, m, k = rng.integers(2, 8), rng.integers(1, 8), rng.integers(0, 3)
    A = rng.normal(size=(m, n))
    b = rng.normal(size=m) + 0.5
    Aeq = rng.normal(size=(k, n))
    x0 = rng.uniform(0, 1, n)
    beq = Aeq @ x0
    c = rng.normal(size=n)
    # a box keeps most instances bounded
    A = np.vstack([A, np.eye(n)])
    b = np.concatenate([b, np.full(n, 5.0)])
    ours = simplex(c, A_ub=A, b_ub=b, A_eq=Aeq if k else None, b_eq=beq if k else None)
    ref = linprog(-c, A_ub=A, b_ub=b, A_eq=Aeq if k else None, b_eq=beq if k else None,
                  bounds=[(0, None)] * n, method="highs")
    if ref.status == 2:
        assert ours.status == "infeasible"
    else:
        assert ref.status == 0
        assert ours.status == "optimal"
        assert ours.objective == pytest.approx(-ref.fun, abs=1e-8)
        assert np.all(A @ ours.x <= b + 1e-8)
        if k:
            assert np.allclose(Aeq @ ours.x, beq, atol=1e-8)
