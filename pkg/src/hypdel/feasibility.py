"""Constructive feasibility test: the largest interior margin over a target's fibre.

The fibre ``Psi^-1(p)`` is ``x0 + span(w_e)`` for any preimage ``x0``, so the
LP is posed in conformal coordinates ``b`` and a margin ``eps``:

    maximize eps  s.t.  x0 + W b >= eps  (every corner),
                        pi - sigma_t(x0 + W b) >= eps  (every face).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .angles import PI, Psi, angles_from_theta, conformal_basis, corner_margin, require_delaunay
from .complex import SurfaceComplex
from .errors import HypDelError
from .simplex import simplex

EPS_MIN = 1e-9


def initial_plus_point(p, c: SurfaceComplex) -> np.ndarray:
    """Split each edge's theta evenly between its two sides and recover the corners.

    Always satisfies ``Psi(x) = p`` with corners in ``(0, pi)``; face angle sums
    may reach or exceed pi.
    """
    p = require_delaunay(p, c)
    theta_side = (PI - p)[c.side_edge] / 2
    return angles_from_theta(theta_side).ravel()


@dataclass(frozen=True)
class MarginLpResult:
    status: str  # "feasible", "infeasible" or "degenerate"
    epsilon_star: float
    x_star: np.ndarray
    b_star: np.ndarray
    iterations: int

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def _face_sum_matrix(F: int) -> sparse.csr_matrix:
    return sparse.kron(sparse.eye(F), np.ones((1, 3)), format="csr")


def margin_lp(p, c: SurfaceComplex, eps_min: float = EPS_MIN) -> MarginLpResult:
    p = require_delaunay(p, c)
    F, E = c.face_count, c.edge_count
    x0 = initial_plus_point(p, c)
    W = conformal_basis(c).toarray()
    SW = (_face_sum_matrix(F) @ W)
    sigma0 = x0.reshape(-1, 3).sum(axis=1)

    # G z <= h with z = (b, eps)
    G = np.block([[-W, np.ones((3 * F, 1))],
                  [SW, np.ones((F, 1))]])
    h = np.concatenate([x0, PI - sigma0])
    # shift eps so the origin is strictly feasible; phase 1 is then trivial
    eps0 = min(x0.min(), (PI - sigma0).min()) - 1.0
    h_shift = h - G[:, -1] * eps0
    # free variables split as z = z_plus - z_minus
    A = np.hstack([G, -G])
    cost = np.zeros(2 * (E + 1))
    cost[E] = 1.0
    cost[2 * E + 1] = -1.0
    res = simplex(cost, A_ub=A, b_ub=h_shift)
    if res.status != "optimal":
        raise HypDelError(f"margin LP returned status {res.status}")
    z = res.x[:E + 1] - res.x[E + 1:]
    b = z[:E]
    x_star = x0 + W @ b
    eps_star = float(z[E] + eps0)
    if eps_star > eps_min:
        status = "feasible"
    elif eps_star < -eps_min:
        status = "infeasible"
    else:
        status = "degenerate"
    return MarginLpResult(status=status, epsilon_star=eps_star, x_star=x_star, b_star=b,
                          iterations=res.iterations)


def fibre_residual(x, p, c: SurfaceComplex) -> float:
    return float(np.abs(Psi(x, c) - np.asarray(p)).max(initial=0.0))


__all__ = ["initial_plus_point", "margin_lp", "MarginLpResult", "EPS_MIN", "fibre_residual",
           "corner_margin"]
