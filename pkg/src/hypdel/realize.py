"""Explicit geometry from a uniform angle system: developed faces, vertex
holonomy, circumcircle intersection angles and ideal prisms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hyperbolic as hyp
from .angles import PI, cone_angles, corner_margin
from .complex import DualTree, SurfaceComplex, central_face, dual_spanning_tree
from .errors import DegenerateCircle, NotCertified
from .volume import ideal_lift, triangle_lengths

COLLINEAR_TOL = 1e-12
WIDE = np.longdouble


@dataclass(frozen=True, eq=False)
class Layout:
    coords: np.ndarray  # (F, 3 corners, 3) hyperboloid coordinates
    frames: np.ndarray  # (F, 3, 3) isometry from canonical placement
    canonical: np.ndarray  # (F, 3, 3) canonical placement of each face
    angles: np.ndarray  # (F, 3)
    lengths: np.ndarray  # (F, 3) side lengths computed inside each face
    tree: DualTree
    gluing_isometries: dict  # non-tree edge -> isometry carrying the second face next to the first

    @property
    def poincare(self) -> np.ndarray:
        return hyp.to_poincare(self.coords)

    @property
    def face_count(self) -> int:
        return self.coords.shape[0]


def canonical_face(angles, lengths, dtype=float) -> np.ndarray:
    """Corner 0 at the origin, corner 1 on the positive x-axis, corner 2 above it."""
    A = dtype(angles[0])
    l1, l2 = dtype(lengths[1]), dtype(lengths[2])
    return np.array([
        [1.0, 0.0, 0.0],
        [np.cosh(l2), np.sinh(l2), 0.0],
        [np.cosh(l1), np.sinh(l1) * np.cos(A), np.sinh(l1) * np.sin(A)],
    ], dtype=dtype)


def attach_isometry(parent: np.ndarray, parent_side: int, child_canonical: np.ndarray,
                    child_side: int) -> np.ndarray:
    """Isometry placing the child face across ``parent_side`` with reversed side orientation.

    The child's side runs from its corner ``t+1`` to ``t+2``; these land on the
    parent's corners ``s+2`` and ``s+1``.
    """
    s, t = parent_side, child_side
    P_start, P_end = parent[(s + 2) % 3], parent[(s + 1) % 3]
    C_start, C_end = child_canonical[(t + 1) % 3], child_canonical[(t + 2) % 3]
    target = hyp.frame(P_start, hyp.unit_tangent(P_start, P_end))
    source = hyp.frame(C_start, hyp.unit_tangent(C_start, C_end))
    return target @ hyp.lorentz_inverse(source)


def _place(parent, parent_side, child_canonical, child_side):
    g = attach_isometry(parent, parent_side, child_canonical, child_side)
    coords = child_canonical @ g.T
    # shared corners are copied so adjacent faces agree exactly
    coords[(child_side + 1) % 3] = parent[(parent_side + 2) % 3]
    coords[(child_side + 2) % 3] = parent[(parent_side + 1) % 3]
    return g, coords


def develop(u, c: SurfaceComplex, tree: DualTree | None = None, root_frame=None,
            residual_tol: float = 1e-8) -> Layout:
    """Lay out one copy of every face in the hyperboloid, gluing along the tree.

    ``u`` is a :class:`UniformSolution` or a bare angle vector.  Coordinates are
    carried in extended precision since they grow exponentially with tree depth.
    """
    x = np.asarray(getattr(u, "angles", u), dtype=float)
    if x.shape != (3 * c.face_count,):
        raise NotCertified("angle system does not match the complex")
    if not corner_margin(x) > 0:
        raise NotCertified("some face is not a hyperbolic triangle")
    d = x.reshape(-1, 3)
    L = triangle_lengths(d, check=False)
    s1, s2 = c.edge_sides[:, 0], c.edge_sides[:, 1]
    mismatch = np.abs(L[s1[:, 0], s1[:, 1]] - L[s2[:, 0], s2[:, 1]]).max(initial=0.0)
    if mismatch > residual_tol:
        raise NotCertified(f"edge lengths disagree by {mismatch:.3e} > {residual_tol:.0e}")
    if tree is None:
        tree = dual_spanning_tree(c, central_face(c))

    F = c.face_count
    canon = np.stack([canonical_face(d[f], L[f]) for f in range(F)])
    wide = np.stack([canonical_face(d[f], L[f], WIDE) for f in range(F)])
    frames = np.empty((F, 3, 3), dtype=WIDE)
    coords = np.empty((F, 3, 3), dtype=WIDE)
    g0 = np.eye(3, dtype=WIDE) if root_frame is None else np.asarray(root_frame, dtype=WIDE)
    r = tree.root_face
    frames[r] = g0
    coords[r] = wide[r] @ g0.T
    for arc in tree.arcs:
        frames[arc.child], coords[arc.child] = _place(
            coords[arc.parent], arc.parent_side, wide[arc.child], arc.child_side)

    glue = {}
    for e in tree.non_tree_edges:
        (f1, i1), (f2, i2) = c.edge_sides[e]
        g_adj = attach_isometry(coords[f1], i1, wide[f2], i2)
        glue[int(e)] = g_adj @ hyp.lorentz_inverse(frames[f2])
    return Layout(coords=coords, frames=frames, canonical=canon, angles=d.copy(), lengths=L,
                  tree=tree, gluing_isometries=glue)


def layout_side_lengths(layout: Layout) -> np.ndarray:
    """Side lengths measured from the developed coordinates."""
    X = layout.coords
    return np.stack([hyp.distance(X[:, (i + 1) % 3], X[:, (i + 2) % 3]) for i in range(3)],
                    axis=1).astype(float)


@dataclass(frozen=True)
class HolonomyReport:
    vertex_totals: np.ndarray  # developed angle around each vertex
    vertex_defects: np.ndarray  # developed total minus the target cone angle
    edge_mismatch: dict  # non-tree edge -> |length in first copy - length in second copy|


def developed_corner_angles(layout: Layout) -> np.ndarray:
    X = layout.coords
    out = np.empty((layout.face_count, 3))
    for f in range(layout.face_count):
        for i in range(3):
            out[f, i] = hyp.corner_angle(X[f, i], X[f, (i + 1) % 3], X[f, (i + 2) % 3])
    return out


def holonomy_report(layout: Layout, u, c: SurfaceComplex) -> HolonomyReport:
    """Total developed angle at each vertex against the target's cone angle, and
    the length disagreement of the two developed copies of each non-tree edge."""
    ang = developed_corner_angles(layout)
    totals = np.zeros(c.vertex_count)
    np.add.at(totals, c.corner_vertex.ravel(), ang.ravel())
    target = getattr(u, "target_echo", u)
    measured = layout_side_lengths(layout)
    mism = {}
    for e in layout.tree.non_tree_edges:
        (f1, i1), (f2, i2) = c.edge_sides[e]
        mism[int(e)] = float(abs(measured[f1, i1] - measured[f2, i2]))
    return HolonomyReport(vertex_totals=totals, vertex_defects=totals - cone_angles(target, c),
                          edge_mismatch=mism)


def edge_pair(layout: Layout, c: SurfaceComplex, e: int):
    """Both faces of edge ``e`` placed next to each other, recentred so the
    first face's centroid sits at the origin.  Returns ``(sides, X1, X2)``.

    The pair is rebuilt from the canonical placements, which differs from the
    layout copy only by an isometry and keeps coordinates small.
    """
    (f1, i1), (f2, i2) = (tuple(int(v) for v in s) for s in c.edge_sides[e])
    X1 = layout.canonical[f1]
    B = hyp.boost_to_origin(hyp.normalize_point(X1.sum(axis=0)))
    X1 = X1 @ B.T
    _, X2 = _place(X1, i1, layout.canonical[f2], i2)
    return ((f1, i1), (f2, i2)), X1, X2


def _one_sided_angle(P: complex, Q: complex, R: complex) -> float:
    """Angle on R's side between the geodesic PQ and the circle through P, Q, R,
    measured at P from the geodesic ray pointing away from Q."""
    T = lambda z: (z - P) / (1 - np.conj(P) * z)  # noqa: E731
    a, b = T(R), T(Q)
    if abs(a) < COLLINEAR_TOL or abs(b) < COLLINEAR_TOL or abs(a - b) < COLLINEAR_TOL:
        raise DegenerateCircle("coincident points")
    g = b / abs(b)
    det = a.real * b.imag - a.imag * b.real
    if abs(det) <= COLLINEAR_TOL * abs(a) * abs(b):
        between = (a.real * b.real + a.imag * b.imag) > 0 and abs(b) < abs(a)
        tau = -a / abs(a) if between else a / abs(a)
    else:
        M = np.array([[a.real, a.imag], [b.real, b.imag]])
        cx, cy = np.linalg.solve(M, [abs(a) ** 2 / 2, abs(b) ** 2 / 2])
        centre = complex(cx, cy)
        tau = np.sign(det) * 1j * (-centre)
        tau /= abs(tau)
    phi = abs(np.angle(tau / g))
    return float(PI - phi)


def circumcircle_angles(layout: Layout, c: SurfaceComplex, one_sided: bool = False):
    """Intersection angle of the circumcircles of the two faces at each edge, as the
    sum of the two one-sided angles between each circle and the shared geodesic."""
    out = np.empty(c.edge_count)
    sides = np.empty((c.edge_count, 2))
    for e in range(c.edge_count):
        ((_, i1), (_, i2)), X1, X2 = edge_pair(layout, c, e)
        Z1, Z2 = hyp.to_poincare(X1), hyp.to_poincare(X2)
        P, Q = Z1[(i1 + 1) % 3], Z1[(i1 + 2) % 3]
        sides[e, 0] = _one_sided_angle(P, Q, Z1[i1])
        sides[e, 1] = _one_sided_angle(P, Q, Z2[i2])
        out[e] = sides[e].sum()
    return (out, sides) if one_sided else out


def euclidean_circumcircle(z):
    """Centre and radius of the circle through three complex points, or ``None`` if collinear."""
    z0, z1, z2 = z
    a, b = z1 - z0, z2 - z0
    det = a.real * b.imag - a.imag * b.real
    if abs(det) <= COLLINEAR_TOL * abs(a) * abs(b):
        return None
    M = np.array([[a.real, a.imag], [b.real, b.imag]])
    cx, cy = np.linalg.solve(M, [abs(a) ** 2 / 2, abs(b) ** 2 / 2])
    centre = z0 + complex(cx, cy)
    return centre, abs(centre - z0)


# --- prisms ---------------------------------------------------------------------------

J4 = np.diag([-1.0, 1.0, 1.0, 1.0])


def _plane_normal(v1, v2, v3, interior):
    """Unit spacelike normal of the hyperbolic plane through three points of R^{3,1},
    oriented away from ``interior``."""
    M = np.stack([v1, v2, v3])
    n = np.array([(-1) ** k * np.linalg.det(np.delete(M, k, axis=1)) for k in range(4)])
    N = J4 @ n
    N = N / np.sqrt(N @ J4 @ N)
    if N @ J4 @ interior > 0:
        N = -N
    return N


def _dihedral(N1, N2) -> float:
    return float(np.arccos(np.clip(-(N1 @ J4 @ N2), -1.0, 1.0)))


@dataclass(frozen=True)
class PrismGeometry:
    upper: np.ndarray  # (3, 3) ideal points above the plane, unit vectors in R^3
    lower: np.ndarray  # (3, 3) reflections z -> -z
    normals: dict  # face name -> unit normal in R^{3,1}
    vertical_dihedrals: np.ndarray  # at the perpendicular through corner i
    top_dihedrals: np.ndarray  # between the top face and the side face over side i
    bottom_dihedrals: np.ndarray


def _null(X):
    return np.concatenate([[1.0], X])


def prism_from_hyperboloid(X: np.ndarray) -> PrismGeometry:
    """Ideal prism over the triangle with hyperboloid vertices ``X`` (rows by corner)."""
    z = hyp.to_poincare(X)
    up = ideal_lift(z, True)
    lo = ideal_lift(z, False)
    centre = hyp.normalize_point(X.sum(axis=0))
    interior = np.array([centre[0], centre[1], centre[2], 0.0])
    U = [_null(p) for p in up]
    Lw = [_null(q) for q in lo]
    normals = {"top": _plane_normal(U[0], U[1], U[2], interior),
               "bottom": _plane_normal(Lw[0], Lw[1], Lw[2], interior)}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        normals[f"side{i}"] = _plane_normal(U[j], U[k], Lw[j], interior)
    vertical = np.array([_dihedral(normals[f"side{(i + 1) % 3}"], normals[f"side{(i + 2) % 3}"])
                         for i in range(3)])
    top = np.array([_dihedral(normals["top"], normals[f"side{i}"]) for i in range(3)])
    bottom = np.array([_dihedral(normals["bottom"], normals[f"side{i}"]) for i in range(3)])
    return PrismGeometry(upper=up, lower=lo, normals=normals, vertical_dihedrals=vertical,
                         top_dihedrals=top, bottom_dihedrals=bottom)


def build_prisms(layout: Layout) -> list[PrismGeometry]:
    return [prism_from_hyperboloid(layout.coords[f]) for f in range(layout.face_count)]


def top_face_angles(layout: Layout, c: SurfaceComplex) -> np.ndarray:
    """Dihedral angle of the union of the two prisms along the top edge over each surface edge."""
    out = np.empty(c.edge_count)
    for e in range(c.edge_count):
        _, X1, X2 = edge_pair(layout, c, e)
        n1 = prism_from_hyperboloid(X1).normals["top"]
        n2 = prism_from_hyperboloid(X2).normals["top"]
        out[e] = _dihedral(n1, n2)
    return out
