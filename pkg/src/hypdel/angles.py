"""Linear functionals on corner-angle vectors.

An angle system is a flat float array of length ``3F``; entry ``3*f + i`` is the
angle of face ``f`` at the corner opposite side ``i``.  Edge targets are arrays
of length ``E`` holding the angle complements ``psi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .complex import SurfaceComplex
from .errors import DimensionMismatch, NotDelaunay, TooLarge

PI = np.pi
IDENTITY_TOL = 1e-12


def _as_corners(x, c: SurfaceComplex | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if c is not None and x.shape != (3 * c.face_count,):
        raise DimensionMismatch(f"angle system has shape {x.shape}, expected ({3 * c.face_count},)")
    return x.reshape(-1, 3)


def _as_target(p, c: SurfaceComplex) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (c.edge_count,):
        raise DimensionMismatch(f"edge target has shape {p.shape}, expected ({c.edge_count},)")
    return p


@dataclass(frozen=True)
class FaceFunctionals:
    sigma: np.ndarray
    k: np.ndarray
    psi_corner: np.ndarray
    theta_corner: np.ndarray


def face_functionals(x) -> FaceFunctionals:
    """Angle sum, curvature and the one-sided psi/theta values of every face.

    Accepts a single face ``(A, B, C)`` or any array whose last axis has size 3.
    For side ``i`` with opposite angle ``A`` and remaining angles ``B, C``:
    ``psi = (B + C - A)/2`` and ``theta = pi/2 - psi``.
    """
    a = np.asarray(x, dtype=float)
    a = a.reshape(-1, 3) if a.ndim == 1 and a.size != 3 else a
    sigma = a.sum(axis=-1)
    psi = sigma[..., None] / 2 - a
    return FaceFunctionals(sigma=sigma, k=sigma - PI, psi_corner=psi, theta_corner=PI / 2 - psi)


def angles_from_theta(theta_corner) -> np.ndarray:
    """Invert the theta-corner map: the angle opposite side i is ``pi - theta_j - theta_k``."""
    th = np.asarray(theta_corner, dtype=float)
    return PI - (th.sum(axis=-1, keepdims=True) - th)


def side_psi(x, c: SurfaceComplex) -> np.ndarray:
    return face_functionals(_as_corners(x, c)).psi_corner


def psi_map(c: SurfaceComplex) -> sparse.csr_matrix:
    """The matrix of Psi: corner vectors to edge vectors."""
    F, E = c.face_count, c.edge_count
    rows, cols, vals = [], [], []
    for f in range(F):
        for i in range(3):
            e = c.side_edge[f, i]
            for j in range(3):
                rows.append(e)
                cols.append(3 * f + j)
                vals.append(-0.5 if j == i else 0.5)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(E, 3 * F))


def Psi(x, c: SurfaceComplex) -> np.ndarray:
    psi = side_psi(x, c)
    out = np.zeros(c.edge_count)
    np.add.at(out, c.side_edge.ravel(), psi.ravel())
    return out


def vertex_sums(x, c: SurfaceComplex) -> np.ndarray:
    a = _as_corners(x, c)
    r = np.zeros(c.vertex_count)
    np.add.at(r, c.corner_vertex.ravel(), a.ravel())
    return r


@dataclass(frozen=True)
class EdgeVertexFunctionals:
    psi_e: np.ndarray
    theta_e: np.ndarray
    r_v: np.ndarray


def edge_and_vertex_functionals(x, c: SurfaceComplex) -> EdgeVertexFunctionals:
    psi = Psi(x, c)
    return EdgeVertexFunctionals(psi_e=psi, theta_e=PI - psi, r_v=vertex_sums(x, c))


def conformal_basis(c: SurfaceComplex) -> sparse.csc_matrix:
    """Columns ``w_e``: +1/2 on the two corners of the first side's face that
    touch the side, -1/2 on the matching corners across the gluing."""
    rows, cols, vals = [], [], []
    for e in range(c.edge_count):
        for (f, s), sign in zip(c.edge_sides[e], (0.5, -0.5)):
            for j in ((s + 1) % 3, (s + 2) % 3):
                rows.append(3 * f + j)
                cols.append(e)
                vals.append(sign)
    # duplicates (self-gluings) are summed by the constructor
    return sparse.csc_matrix((vals, (rows, cols)), shape=(3 * c.face_count, c.edge_count))


def conformal_move(x, b, c: SurfaceComplex) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _as_corners(x, c)
    b = np.asarray(b, dtype=float)
    if b.shape != (c.edge_count,):
        raise DimensionMismatch(f"conformal vector has shape {b.shape}, expected ({c.edge_count},)")
    return x + conformal_basis(c) @ b


def cone_angles(p, c: SurfaceComplex) -> np.ndarray:
    """Sum of psi over edge-endpoint incidences at each vertex (loops count twice)."""
    p = _as_target(p, c)
    out = np.zeros(c.vertex_count)
    f, s = c.edge_sides[:, 0, 0], c.edge_sides[:, 0, 1]
    np.add.at(out, c.corner_vertex[f, (s + 1) % 3], p)
    np.add.at(out, c.corner_vertex[f, (s + 2) % 3], p)
    return out


@dataclass(frozen=True)
class TargetCheck:
    delaunay: bool
    nonsingular: bool
    cone_angles: np.ndarray
    bad_edges: tuple[int, ...]


def check_target(p, c: SurfaceComplex, tol: float = IDENTITY_TOL) -> TargetCheck:
    p = _as_target(p, c)
    cones = cone_angles(p, c)
    bad = tuple(int(e) for e in np.flatnonzero(~((p > 0) & (p < PI))))
    return TargetCheck(
        delaunay=not bad,
        nonsingular=bool(np.all(np.abs(cones - 2 * PI) <= tol)),
        cone_angles=cones,
        bad_edges=bad,
    )


def require_delaunay(p, c: SurfaceComplex) -> np.ndarray:
    p = _as_target(p, c)
    chk = check_target(p, c)
    if not chk.delaunay:
        e = chk.bad_edges[0]
        raise NotDelaunay(f"psi[{e}] = {float(p[e])!r} is not in (0, pi)")
    return p


def face_edge_incidence(c: SurfaceComplex) -> np.ndarray:
    inc = np.zeros((c.face_count, c.edge_count), dtype=bool)
    inc[np.repeat(np.arange(c.face_count), 3), c.side_edge.ravel()] = True
    return inc


@dataclass(frozen=True)
class BruteForceResult:
    feasible: bool
    witness: tuple[int, ...] | None
    margin: float
    minimizer: tuple[int, ...]


def feasibility_bruteforce(p, c: SurfaceComplex, max_faces: int = 20) -> BruteForceResult:
    """Check ``sum(theta over edges touching S) > pi |S|`` for every nonempty face set S."""
    F = c.face_count
    if F > max_faces:
        raise TooLarge(f"{F} faces exceeds brute-force limit {max_faces}")
    p = require_delaunay(p, c)
    theta = PI - p
    inc = face_edge_incidence(c).astype(np.int32)
    best, best_mask = np.inf, 0
    total = 1 << F
    chunk = 1 << 16
    bits = np.arange(F, dtype=np.int64)
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        member = ((masks[:, None] >> bits) & 1).astype(np.int32)
        touched = (member @ inc) > 0
        slack = touched @ theta - PI * member.sum(axis=1)
        i = int(np.argmin(slack))
        if slack[i] < best:
            best, best_mask = float(slack[i]), int(masks[i])
    subset = tuple(f for f in range(F) if best_mask >> f & 1)
    feasible = best > 0
    return BruteForceResult(feasible=feasible, witness=None if feasible else subset,
                            margin=best, minimizer=subset)


@dataclass(frozen=True)
class SubsetIdentity:
    lhs: float
    rhs: float


def formula_sett(x, S, c: SurfaceComplex) -> SubsetIdentity:
    """Both sides of the subset identity relating theta over the edges touching S
    to curvature inside S and the outside one-sided psi values."""
    a = _as_corners(x, c)
    ff = face_functionals(a)
    theta_e = PI - Psi(x, c)
    inS = np.zeros(c.face_count, dtype=bool)
    inS[list(S)] = True
    touched = np.zeros(c.edge_count, dtype=bool)
    touched[c.side_edge[inS].ravel()] = True
    lhs = float(theta_e[touched].sum())
    rhs = float((PI - ff.k[inS] / 2).sum())
    for e in np.flatnonzero(touched):
        for f, s in c.edge_sides[e]:
            if not inS[f]:
                rhs += PI / 2 - ff.psi_corner[f, s]
    return SubsetIdentity(lhs=lhs, rhs=rhs)


def corner_margin(x) -> float:
    """Distance of an angle vector to the boundary of the realizable set:
    min over corners of the angle and over faces of ``pi - sigma``."""
    a = np.asarray(x, dtype=float).reshape(-1, 3)
    return float(min(a.min(), (PI - a.sum(axis=1)).min()))
