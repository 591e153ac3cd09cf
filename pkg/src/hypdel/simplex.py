"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Solves ``maximize c @ x`` subject to ``A_ub @ x <= b_ub``, ``A_eq @ x == b_eq``,
``x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimplexCycleGuardTripped

PIVOT_TOL = 1e-11
COST_TOL = 1e-11


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: np.ndarray | None
    objective: float | None
    iterations: int


class _Tableau:
    def __init__(self, T: np.ndarray, basis: np.ndarray):
        self.T = T
        self.basis = basis
        self.iterations = 0

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        if nz.size:
            T[nz] -= np.outer(col[nz], T[r])
        T[nz, j] = 0.0
        self.basis[r] = j
        self.iterations += 1

    def run(self, obj_row: int, n_rows: int, allowed: np.ndarray, max_iter: int) -> str:
        """Iterate on objective row ``obj_row`` (reduced costs stored as ``c_j - z_j``)."""
        T = self.T
        for _ in range(max_iter):
            red = T[obj_row, :-1]
            cand = np.flatnonzero((red > COST_TOL) & allowed)
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])  # Bland: smallest eligible index enters
            col = T[:n_rows, j]
            pos = np.flatnonzero(col > PIVOT_TOL)
            if pos.size == 0:
                return "unbounded"
            ratios = T[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
            # Bland: among tied rows, the one whose basic variable has the smallest index
            r = int(ties[np.argmin(self.basis[ties])])
            self.pivot(r, j)
        raise SimplexCycleGuardTripped(f"no optimum after {max_iter} pivots")


def simplex(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter: int | None = None,
            feas_tol: float = 1e-9) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    # columns: x (n) | slacks (m_ub) | artificials (n_art) | rhs
    sign_ub = np.where(b_ub < 0, -1.0, 1.0)
    sign_eq = np.where(b_eq < 0, -1.0, 1.0)
    need_art = np.concatenate([b_ub < 0, np.ones(m_eq, dtype=bool)])
    art_rows = np.flatnonzero(need_art)
    n_art = art_rows.size
    width = n + m_ub + n_art
    T = np.zeros((m + 2, width + 1))
    T[:m_ub, :n] = A_ub * sign_ub[:, None]
    T[:m_ub, n:n + m_ub] = np.diag(sign_ub)
    T[:m_ub, -1] = b_ub * sign_ub
    T[m_ub:m, :n] = A_eq * sign_eq[:, None]
    T[m_ub:m, -1] = b_eq * sign_eq
    basis = np.empty(m, dtype=np.int64)
    basis[:m_ub] = n + np.arange(m_ub)
    for k, r in enumerate(art_rows):
        T[r, n + m_ub + k] = 1.0
        basis[r] = n + m_ub + k

    PHASE2, PHASE1 = m, m + 1
    T[PHASE2, :n] = c
    # phase-1 objective: maximize -sum(artificials), expressed in non-basic terms
    if n_art:
        T[PHASE1, :] = T[art_rows].sum(axis=0)
        T[PHASE1, n + m_ub:width] = 0.0

    if max_iter is None:
        max_iter = 50 * (m + width) + 1000
    tab = _Tableau(T, basis)
    allowed = np.ones(width, dtype=bool)

    if n_art:
        tab.run(PHASE1, m, allowed, max_iter)
        if T[PHASE1, -1] > feas_tol * max(1.0, np.abs(T[:m, -1]).max(initial=0.0)):
            return LPResult("infeasible", None, None, tab.iterations)
        is_art = np.zeros(width, dtype=bool)
        is_art[n + m_ub:] = True
        # pivot remaining (zero-level) artificials out of the basis
        for r in range(m):
            if is_art[basis[r]]:
                row = T[r, :n + m_ub]
                nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if nz.size:
                    tab.pivot(r, int(nz[0]))
        allowed = ~is_art

    status = tab.run(PHASE2, m, allowed, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, tab.iterations)
    x = np.zeros(width)
    x[basis] = T[:m, -1]
    x = x[:n]
    return LPResult("optimal", x, float(c @ x), tab.iterations)
