"""Newton ascent of the prism-volume objective over a conformal class."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from .angles import Psi, conformal_basis, corner_margin, require_delaunay
from .complex import SurfaceComplex
from .errors import Infeasible, MaxIterExceeded, NumericalBreakdown
from .feasibility import margin_lp
from .volume import objective, objective_and_gradient, triangle_lengths

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
MAX_HALVINGS = 60


@dataclass(frozen=True)
class UniformSolution:
    angles: np.ndarray
    lengths: np.ndarray
    residual: float
    iterations: int
    target_echo: np.ndarray
    H: float
    grad_norm: float
    history: tuple = field(default=(), repr=False)


def side_lengths(x) -> np.ndarray:
    return triangle_lengths(np.asarray(x, dtype=float).reshape(-1, 3), check=False)


def length_mismatch(x, c: SurfaceComplex) -> np.ndarray:
    """Per edge, the difference of its length as computed inside its two faces."""
    L = side_lengths(x)
    s1, s2 = c.edge_sides[:, 0], c.edge_sides[:, 1]
    return L[s1[:, 0], s1[:, 1]] - L[s2[:, 0], s2[:, 1]]


def edge_lengths(x, c: SurfaceComplex) -> np.ndarray:
    L = side_lengths(x)
    s1, s2 = c.edge_sides[:, 0], c.edge_sides[:, 1]
    return 0.5 * (L[s1[:, 0], s1[:, 1]] + L[s2[:, 0], s2[:, 1]])


def _newton_direction(hess: sparse.csr_matrix, grad: np.ndarray) -> np.ndarray | None:
    try:
        step = spla.spsolve(hess.tocsc(), -grad)
    except (RuntimeError, ValueError):
        return None
    if not np.all(np.isfinite(step)) or grad @ step <= 0:
        return None
    return step


def uniformize(p, c: SurfaceComplex, tol: float = 1e-10, max_iter: int = 200,
               start=None, hessian: str = "analytic") -> UniformSolution:
    """Maximize the prism-volume sum over ``Psi^-1(p)`` starting from an interior point.

    Without ``start`` the margin-LP maximizer is used and an infeasible target
    raises :class:`Infeasible`.
    """
    p = require_delaunay(p, c)
    if start is None:
        lp = margin_lp(p, c)
        if not lp.feasible:
            raise Infeasible(f"target is not feasible (margin {lp.epsilon_star:.3e}, {lp.status})", lp)
        x = lp.x_star.copy()
    else:
        x = np.array(start, dtype=float)
        if x.shape != (3 * c.face_count,):
            raise ValueError("start point has the wrong length")
    W = conformal_basis(c)
    history = []
    for it in range(max_iter + 1):
        obj = objective_and_gradient(x, c, hessian=hessian)
        mismatch = length_mismatch(x, c)
        residual = float(np.abs(mismatch).max(initial=0.0))
        history.append((obj.H, residual))
        logger.debug("iter %d H=%.16g residual=%.3e", it, obj.H, residual)
        if residual <= tol:
            return UniformSolution(
                angles=x, lengths=edge_lengths(x, c), residual=residual, iterations=it,
                target_echo=p.copy(), H=obj.H,
                grad_norm=float(np.abs(obj.grad).max(initial=0.0)), history=tuple(history),
            )
        if it == max_iter:
            break
        direction = _newton_direction(obj.hess, obj.grad)
        candidates = [d for d in (direction, obj.grad) if d is not None]
        for d in candidates:
            accepted = _line_search(x, d, obj.H, obj.grad, W, c)
            if accepted is not None:
                x = accepted
                break
        else:
            raise NumericalBreakdown(
                f"no acceptable step at iteration {it} (residual {residual:.3e})")
    raise MaxIterExceeded(
        f"no convergence in {max_iter} iterations (residual {residual:.3e})",
        residual=residual, min_margin=corner_margin(x), iterations=max_iter)


def _line_search(x, d, H, grad, W, c):
    slope = float(grad @ d)
    # objective differences below round-off cannot be resolved
    noise = 64 * np.finfo(float).eps * max(1.0, abs(H)) * np.sqrt(c.face_count)
    t = 1.0
    dx = W @ d
    for _ in range(MAX_HALVINGS):
        cand = x + t * dx
        if corner_margin(cand) > 0:
            Hc = objective(cand, c)
            if Hc >= H + ARMIJO * t * slope - noise:
                return cand
        t *= 0.5
    return None


@dataclass
class Certificate:
    checks: dict
    offending_edges: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return all(item["pass"] for item in self.checks.values())


def certify(u: UniformSolution, c: SurfaceComplex, tol: float = 1e-10) -> Certificate:
    """Re-check criticality, concavity, the target and realizability at ``u``."""
    x = np.asarray(u.angles, dtype=float)
    margin = corner_margin(x)
    checks = {"realizable": {"value": margin, "tol": 0.0, "pass": bool(margin > 0)}}
    target_err = float(np.abs(Psi(x, c) - u.target_echo).max(initial=0.0))
    checks["target"] = {"value": target_err, "tol": 1e-9, "pass": target_err <= 1e-9}
    offending: tuple[int, ...] = ()
    if margin > 0:
        obj = objective_and_gradient(x, c, hessian="analytic", margin_tol=0.0)
        g = np.abs(obj.grad)
        gtol = 10 * tol
        offending = tuple(int(e) for e in np.flatnonzero(g > gtol))
        checks["gradient"] = {"value": float(g.max(initial=0.0)), "tol": gtol, "pass": not offending}
        hmax = max_eigenvalue(obj.hess)
        checks["concavity"] = {"value": hmax, "tol": 0.0, "pass": hmax < 0}
        resid = float(np.abs(length_mismatch(x, c)).max(initial=0.0))
        checks["lengths"] = {"value": resid, "tol": 10 * tol, "pass": resid <= 10 * tol}
    return Certificate(checks=checks, offending_edges=offending)


def max_eigenvalue(hess: sparse.spmatrix) -> float:
    n = hess.shape[0]
    if n <= 1500:
        return float(np.linalg.eigvalsh(hess.toarray())[-1])
    return float(spla.eigsh(hess, k=1, which="LA", return_eigenvectors=False)[0])
